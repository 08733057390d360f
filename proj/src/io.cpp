// SPDX-License-Identifier: Apache-2.0
#include "passlab/io.hpp"

#include <charconv>
#include <filesystem>
#include <stdexcept>

#include "passlab/core.hpp"

namespace passlab {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
}

CsvWriter::~CsvWriter() {
    try {
        finish();
    } catch (...) {
    }
}

void CsvWriter::row(std::span<const std::string> cells) {
    if (finished_) throw std::logic_error("CsvWriter: row after finish");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::string& c = cells[i];
        if (i > 0) out_ << ',';
        if (c.find_first_of(",\"\n") != std::string::npos) {
            out_ << '"';
            for (char ch : c) {
                if (ch == '"') out_ << '"';
                out_ << ch;
            }
            out_ << '"';
        } else {
            out_ << c;
        }
    }
    out_ << '\n';
}

void CsvWriter::row(std::initializer_list<std::string> cells) {
    row(std::span<const std::string>(cells.begin(), cells.size()));
}

void CsvWriter::finish() {
    if (finished_) return;
    finished_ = true;
    out_ << "# manifest=manifest.json\n";
    out_.flush();
}

void write_manifest(const RunManifest& m, const std::string& dir) {
    std::ofstream out(dir + "/manifest.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest in " + dir);
    out << "{\n";
    out << "  \"command\": \"" << m.command << "\",\n";
    out << "  \"seed\": " << m.seed << ",\n";
    out << "  \"config_fnv\": \"" << strfmt("%016llx", static_cast<unsigned long long>(m.config_fnv))
        << "\",\n";
    out << "  \"kernels\": \"" << m.kernels << "\",\n";
    out << "  \"version\": \"" << m.version << "\",\n";
    out << "  \"wall_seconds\": " << format_double(m.wall_seconds) << ",\n";
    out << "  \"outputs\": [";
    for (std::size_t i = 0; i < m.outputs.size(); ++i)
        out << (i == 0 ? "" : ", ") << '"' << m.outputs[i] << '"';
    out << "]\n}\n";
}

void ensure_directory(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create directory " + dir + ": " + ec.message());
}

}  // namespace passlab
