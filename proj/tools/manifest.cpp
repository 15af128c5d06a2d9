// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#include "manifest.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "psq/inverted_index.hpp"

namespace psq::cli {

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open for hashing: " + path);

    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256 init failed");
    }
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));

    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);

    std::string hex;
    char byte[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(byte, sizeof byte, "%02x", digest[i]);
        hex += byte;
    }
    return hex;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const nlohmann::json& parameters,
                    const std::map<std::string, std::string>& input_paths) {
    nlohmann::json inputs = nlohmann::json::object();
    for (const auto& [name, path] : input_paths)
        inputs[name] = {{"path", path}, {"sha256", sha256_file(path)}};

    const nlohmann::json manifest = {{"command", command},
                                     {"parameters", parameters},
                                     {"inputs", inputs},
                                     {"version", std::string(kVersion)},
                                     {"timestamp", utc_timestamp()}};

    const auto path = std::filesystem::path(out_dir) / "manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path.string());
    out << manifest.dump(2) << '\n';
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

} // namespace psq::cli
