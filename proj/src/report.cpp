#include "renormlab/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace renormlab {

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Json Report::to_json() const {
    Json hashed;
    hashed["command"] = command;
    hashed["inputs"] = inputs;
    hashed["outputs"] = outputs;
    hashed["checks"] = checks;

    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(hashed.dump())));

    Json j;
    j["schema"] = "renorm-lab/1";
    j["command"] = command;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["checks"] = checks;
    j["section_hash"] = std::string(buf);
    j["timings"] = timings;
    return j;
}

std::string csv_quote(const std::string& field) {
    bool needs = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        out << csv_quote(header[i]);
    }
    out << "\r\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << csv_quote(row[i]);
        }
        out << "\r\n";
    }
    return out.str();
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
}

} // namespace renormlab
