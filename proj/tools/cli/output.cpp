// SPDX-License-Identifier: MIT
#include "output.hpp"

#include "coauction/coauction.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cli {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string banner(const Provenance& p, const char* kind) {
    std::ostringstream os;
    os << "# coauction " << kind << " schema_version=" << kSchemaVersion << " library=" << coa_version()
       << " command=" << p.command << " config_sha256=" << p.config_hash << '\n';
    return os.str();
}

std::string quoted(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

} // namespace

void Table::add(std::vector<std::string> cells) {
    if (cells.size() != columns_.size()) throw std::logic_error("row width does not match the header of " + file_);
    rows_.push_back(std::move(cells));
}

std::string Table::render_csv(const Provenance& p) const {
    std::string out = banner(p, "csv");
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + quoted(cells[i]);
        out += '\n';
    };
    line(columns_);
    for (const auto& r : rows_) line(r);
    return out;
}

std::string Table::render_plot(const Provenance& p, std::size_t block_column) const {
    std::string out = banner(p, "plot-data");
    out += "#";
    for (const auto& c : columns_) out += " " + c;
    out += '\n';
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        if (k > 0 && rows_[k][block_column] != rows_[k - 1][block_column]) out += "\n\n";
        for (std::size_t i = 0; i < rows_[k].size(); ++i) out += (i ? " " : "") + rows_[k][i];
        out += '\n';
    }
    return out;
}

std::vector<std::string> OutputSet::write(const std::string& dir) const {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::vector<std::string> written;
    for (const auto& [name, content] : files_) {
        const fs::path path = fs::path(dir) / name;
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        os << content;
        if (!os) throw std::runtime_error("cannot write " + path.string());
        written.push_back(path.string());
    }
    return written;
}

} // namespace cli
