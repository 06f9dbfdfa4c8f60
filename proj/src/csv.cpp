#include "gpstack/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "gpstack/errors.hpp"

namespace gpstack {

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    if (lines.empty()) throw DataError("'" + path.string() + "': empty file");
    return lines;
}

void require_header(const std::filesystem::path& path, const std::string& got,
                    const std::string& expected) {
    if (got != expected)
        throw DataError("'" + path.string() + "': expected header '" + expected + "', got '" +
                        got + "'");
}

} // namespace

std::vector<ArchRankRow> read_arch_rank_csv(const std::filesystem::path& path,
                                            const std::string& rank_header) {
    const auto lines = read_lines(path);
    require_header(path, lines[0], "arch," + rank_header);
    std::vector<ArchRankRow> rows;
    rows.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw DataError("'" + path.string() + "' line " + std::to_string(i + 1) +
                            ": expected 'arch,rank'");
        ArchRankRow row;
        row.arch = line.substr(0, comma);
        const std::string rank_text = line.substr(comma + 1);
        auto [ptr, ec] = std::from_chars(rank_text.data(), rank_text.data() + rank_text.size(),
                                         row.rank);
        if (ec != std::errc{} || ptr != rank_text.data() + rank_text.size())
            throw DataError("'" + path.string() + "' line " + std::to_string(i + 1) +
                            ": rank '" + rank_text + "' is not an integer");
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::string> read_arch_csv(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    require_header(path, lines[0], "arch");
    std::vector<std::string> archs;
    archs.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        if (lines[i].find(',') != std::string::npos)
            throw DataError("'" + path.string() + "' line " + std::to_string(i + 1) +
                            ": unexpected extra column");
        archs.push_back(lines[i]);
    }
    return archs;
}

void write_arch_rank_csv(const std::filesystem::path& path, const std::vector<ArchRankRow>& rows,
                         const std::string& rank_header) {
    std::ostringstream out;
    out << "arch," << rank_header << "\n";
    for (const auto& row : rows) out << row.arch << "," << row.rank << "\n";
    atomic_write(path, out.str());
}

void write_arch_csv(const std::filesystem::path& path, const std::vector<std::string>& archs) {
    std::ostringstream out;
    out << "arch\n";
    for (const auto& arch : archs) out << arch << "\n";
    atomic_write(path, out.str());
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw Error("format_double: conversion failed");
    return {buf, ptr};
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out) throw DataError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw DataError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " +
                        ec.message());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace gpstack
