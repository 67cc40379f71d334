// SPDX-License-Identifier: MIT
// CSV and plot-data buffers, flushed to disk only after a command finishes.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace cli {

inline constexpr int kSchemaVersion = 1;

std::string num(double v);

struct Provenance {
    std::string command;
    std::string config_hash;
};

class Table {
public:
    Table(std::string file, std::vector<std::string> columns) : file_(std::move(file)), columns_(std::move(columns)) {}

    void add(std::vector<std::string> cells);
    const std::string& file() const noexcept { return file_; }
    std::string render_csv(const Provenance& p) const;
    // Whitespace-separated columns; rows sharing a value in block_column
    // become one gnuplot data block.
    std::string render_plot(const Provenance& p, std::size_t block_column) const;

private:
    std::string file_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

class OutputSet {
public:
    explicit OutputSet(Provenance p) : provenance_(std::move(p)) {}

    void csv(const Table& t) { files_.emplace_back(t.file(), t.render_csv(provenance_)); }
    void plot(const Table& t, const std::string& file, std::size_t block_column) {
        files_.emplace_back(file, t.render_plot(provenance_, block_column));
    }
    const Provenance& provenance() const noexcept { return provenance_; }

    // Throws std::filesystem::filesystem_error or std::runtime_error on I/O failure.
    std::vector<std::string> write(const std::string& dir) const;

private:
    Provenance provenance_;
    std::vector<std::pair<std::string, std::string>> files_;
};

} // namespace cli
