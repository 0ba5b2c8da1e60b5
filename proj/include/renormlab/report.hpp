#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace renormlab {

using Json = nlohmann::json;

// Versioned report envelope. Everything except "timings" participates in the
// section hash, so repeated runs with one config are byte-comparable.
struct Report {
    std::string command;
    Json inputs = Json::object();
    Json outputs = Json::object();
    Json checks = Json::object();
    Json timings = Json::object();

    Json to_json() const;  // includes "schema" and "section_hash"
};

std::uint64_t fnv1a64(const std::string& bytes);

std::string csv_quote(const std::string& field);

// RFC-4180-style CSV assembly: header plus rows, every field quoted on demand.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& text);

} // namespace renormlab
