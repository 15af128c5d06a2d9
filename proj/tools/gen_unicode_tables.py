#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Regenerates src/unicode_tables.inc from Python's unicodedata.

The tokenizer needs four fixed tables: lowercase mappings, compatibility
decompositions with combining marks removed (diacritic stripping),
combining-mark ranges, and punctuation ranges.  Coverage is the scripts of
the collections we index (Latin, Greek, Cyrillic, Arabic/Persian, CJK
punctuation, fullwidth forms); CJK ideographs need no entries.

    python3 tools/gen_unicode_tables.py > src/unicode_tables.inc
"""

import sys
import unicodedata

LOWER_RANGES = [(0x0041, 0x052F), (0x1E00, 0x1FFF), (0x2C60, 0x2C7F),
                (0xA640, 0xA7FF), (0xFF21, 0xFF3A)]
DECOMP_RANGES = [(0x00A0, 0x052F), (0x1E00, 0x1FFF), (0x2C60, 0x2C7F),
                 (0xFB00, 0xFB4F), (0xFF01, 0xFFEE)]
SCAN_LIMIT = 0x10000


def cpp_utf8(s: str) -> str:
    return '"' + ''.join('\\x%02x' % b for b in s.encode('utf-8')) + '"'


def is_combining(ch: str) -> bool:
    return unicodedata.category(ch) == 'Mn'


def ranges_of(pred):
    out = []
    start = None
    for cp in range(SCAN_LIMIT):
        ok = pred(chr(cp))
        if ok and start is None:
            start = cp
        elif not ok and start is not None:
            out.append((start, cp - 1))
            start = None
    if start is not None:
        out.append((start, SCAN_LIMIT - 1))
    return out


def lower_entries():
    out = []
    for lo, hi in LOWER_RANGES:
        for cp in range(lo, hi + 1):
            c = chr(cp)
            l = c.lower()
            if l != c:
                out.append((cp, l))
    return out


def decomp_entries():
    out = []
    for lo, hi in DECOMP_RANGES:
        for cp in range(lo, hi + 1):
            c = chr(cp)
            d = unicodedata.normalize('NFKD', c)
            stripped = ''.join(x for x in d if not is_combining(x) and not x.isspace())
            if stripped != c:
                out.append((cp, stripped))
    return out


def main():
    w = sys.stdout.write
    w('// Generated by tools/gen_unicode_tables.py (Unicode %s). Do not edit.\n'
      % unicodedata.unidata_version)
    w('// clang-format off\n\n')

    lower = lower_entries()
    w('inline constexpr CpMapping kLowercaseMap[] = {\n')
    for cp, s in lower:
        w('    {0x%04X, %s},\n' % (cp, cpp_utf8(s)))
    w('};\n\n')

    dec = decomp_entries()
    w('inline constexpr CpMapping kStripMarksMap[] = {\n')
    for cp, s in dec:
        w('    {0x%04X, %s},\n' % (cp, cpp_utf8(s)))
    w('};\n\n')

    comb = ranges_of(is_combining)
    w('inline constexpr CpRange kCombiningMarkRanges[] = {\n')
    for lo, hi in comb:
        w('    {0x%04X, 0x%04X},\n' % (lo, hi))
    w('};\n\n')

    punct = ranges_of(lambda c: unicodedata.category(c).startswith('P'))
    w('inline constexpr CpRange kPunctuationRanges[] = {\n')
    for lo, hi in punct:
        w('    {0x%04X, 0x%04X},\n' % (lo, hi))
    w('};\n\n')

    ws = ranges_of(lambda c: unicodedata.category(c) in ('Zs', 'Zl', 'Zp')
                   or ord(c) in (0x09, 0x0A, 0x0B, 0x0C, 0x0D, 0x85))
    w('inline constexpr CpRange kWhitespaceRanges[] = {\n')
    for lo, hi in ws:
        w('    {0x%04X, 0x%04X},\n' % (lo, hi))
    w('};\n')
    w('// clang-format on\n')


if __name__ == '__main__':
    main()
