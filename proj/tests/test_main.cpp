// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
