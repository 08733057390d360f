// SPDX-License-Identifier: Apache-2.0
#ifndef PASSLAB_IO_HPP
#define PASSLAB_IO_HPP

#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace passlab {

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

// CSV with LF line ends and minimal quoting. Every file ends with a comment
// line pointing at the run manifest so a stray CSV can be traced to its run.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path);
    ~CsvWriter();

    void row(std::span<const std::string> cells);
    void row(std::initializer_list<std::string> cells);
    void finish();

  private:
    std::ofstream out_;
    bool finished_ = false;
};

struct RunManifest {
    std::string command;
    std::uint64_t seed = 0;
    std::uint64_t config_fnv = 0;
    std::string kernels;
    std::string version;
    std::vector<std::string> outputs;
    double wall_seconds = 0;
};

// Writes dir/manifest.json.
void write_manifest(const RunManifest& m, const std::string& dir);

void ensure_directory(const std::string& dir);

}  // namespace passlab

#endif
