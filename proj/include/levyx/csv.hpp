#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "levyx/errors.hpp"

namespace levyx {

// CSV with '#'-prefixed provenance header lines; byte-identical output for
// identical inputs when the timestamp line is suppressed.
class CsvWriter {
public:
    void comment(const std::string& line) { comments_.push_back(line); }
    void header(std::vector<std::string> cols) { cols_ = std::move(cols); }

    void row(const std::vector<double>& vals) {
        std::ostringstream ss;
        ss << std::setprecision(12);
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (i) ss << ",";
            ss << vals[i];
        }
        rows_.push_back(ss.str());
    }

    std::string str() const {
        std::ostringstream out;
        for (const auto& c : comments_) out << "# " << c << "\n";
        for (std::size_t i = 0; i < cols_.size(); ++i)
            out << (i ? "," : "") << cols_[i];
        if (!cols_.empty()) out << "\n";
        for (const auto& r : rows_) out << r << "\n";
        return out.str();
    }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw ConfigError("cannot open output file " + path);
        out << str();
    }

private:
    std::vector<std::string> comments_;
    std::vector<std::string> cols_;
    std::vector<std::string> rows_;
};

} // namespace levyx
