// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace transrad {

// Deterministic CSV assembly: fixed %.12e formatting and caller-fixed row
// order make identical configs produce byte-identical files.
class CsvWriter {
 public:
  void metadata(const std::string& key, const std::string& value) {
    head_ += "# " + key + "=" + value + "\n";
  }

  void columns(const std::vector<std::string>& names) {
    std::string row;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (i) row += ',';
      row += names[i];
    }
    body_ += row + "\n";
  }

  void cell(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    if (!row_.empty()) row_ += ',';
    row_ += buf;
  }

  void cell(const std::string& s) {
    if (!row_.empty()) row_ += ',';
    row_ += s;
  }

  void end_row() {
    body_ += row_ + "\n";
    row_.clear();
  }

  std::string str() const { return head_ + body_; }

  void write_file(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open output file '" + path + "'");
    const std::string s = str();
    std::fwrite(s.data(), 1, s.size(), f);
    std::fclose(f);
  }

  static std::string hex64(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

 private:
  std::string head_;
  std::string body_;
  std::string row_;
};

}  // namespace transrad
