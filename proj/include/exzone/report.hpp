#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace exzone::io {

// Headered CSV with deterministic bytes: \n endings, %.12g numerics.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);

    void row(const std::vector<std::string>& cells);

    static std::string cell(double v);
    static std::string cell(long v);
    static std::string cell(std::uint64_t v);

  private:
    std::ofstream out_;
    std::size_t n_cols_;
};

}  // namespace exzone::io
