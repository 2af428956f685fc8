/**
 * Copyright 2026 The psim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "psim/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "psim/errors.hpp"

namespace psim {

namespace {

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream stream(line);
    std::string field;
    while (std::getline(stream, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_field(const std::string& field, const std::string& anchor) {
    double parsed = 0.0;
    const auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), parsed);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw parse_error(anchor + ": '" + field + "' is not a number");
    }
    return parsed;
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) {
        throw io_error("cannot open '" + path + "' for reading");
    }
    std::ostringstream content;
    content << stream.rdbuf();
    if (stream.bad()) {
        throw io_error("failed while reading '" + path + "'");
    }
    return content.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    std::error_code ec;
    if (target.has_parent_path()) {
        std::filesystem::create_directories(target.parent_path(), ec);
        if (ec) {
            throw io_error("cannot create directory '" +
                           target.parent_path().string() +
                           "': " + ec.message());
        }
    }
    std::ofstream stream(path, std::ios::binary | std::ios::trunc);
    if (!stream) {
        throw io_error("cannot open '" + path + "' for writing");
    }
    stream << content;
    stream.flush();
    if (!stream) {
        throw io_error("failed while writing '" + path + "'");
    }
}

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::string sha1_git_blob(const std::string& content) {
    std::string header = "blob " + std::to_string(content.size());
    header.push_back('\0');

    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int digest_len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr ||
        EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, header.data(), header.size()) != 1 ||
        EVP_DigestUpdate(ctx, content.data(), content.size()) != 1 ||
        EVP_DigestFinal_ex(ctx, digest, &digest_len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw io_error("SHA-1 digest computation failed");
    }
    EVP_MD_CTX_free(ctx);

    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * digest_len);
    for (unsigned int i = 0; i < digest_len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::vector<DipPoint> parse_dip_csv(const std::string& text,
                                    const std::string& source) {
    std::stringstream stream(text);
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(stream, line)) {
        throw parse_error(source + ": empty CSV");
    }
    ++line_no;
    const std::vector<std::string> header = split_fields(line);
    enum class Layout { counts, counts_sigma, scan } layout;
    if (header == std::vector<std::string>{"tau_s", "counts"}) {
        layout = Layout::counts;
    } else if (header ==
               std::vector<std::string>{"tau_s", "counts", "sigma"}) {
        layout = Layout::counts_sigma;
    } else if (header == std::vector<std::string>{"tau_s", "expected_prob",
                                                  "expected_counts",
                                                  "sampled_counts"}) {
        layout = Layout::scan;
    } else {
        throw parse_error(source +
                          ":1: expected header tau_s,counts[,sigma] or "
                          "tau_s,expected_prob,expected_counts,"
                          "sampled_counts");
    }

    std::vector<DipPoint> points;
    while (std::getline(stream, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::string anchor = source + ":" + std::to_string(line_no);
        const std::vector<std::string> fields = split_fields(line);
        const std::size_t expected_fields =
            layout == Layout::counts ? 2 : layout == Layout::counts_sigma ? 3
                                                                          : 4;
        if (fields.size() != expected_fields) {
            throw parse_error(anchor + ": expected " +
                              std::to_string(expected_fields) +
                              " fields, got " +
                              std::to_string(fields.size()));
        }
        DipPoint point;
        point.tau_s = parse_field(fields[0], anchor);
        switch (layout) {
            case Layout::counts:
                point.counts = parse_field(fields[1], anchor);
                point.sigma = std::sqrt(std::max(point.counts, 1.0));
                break;
            case Layout::counts_sigma:
                point.counts = parse_field(fields[1], anchor);
                point.sigma = parse_field(fields[2], anchor);
                if (!(point.sigma > 0.0)) {
                    throw parse_error(anchor + ": sigma must be > 0");
                }
                break;
            case Layout::scan:
                point.counts = parse_field(fields[3], anchor);
                point.sigma = std::sqrt(std::max(point.counts, 1.0));
                break;
        }
        if (point.counts < 0.0) {
            throw parse_error(anchor + ": counts must be >= 0");
        }
        points.push_back(point);
    }
    return points;
}

}  // namespace psim
