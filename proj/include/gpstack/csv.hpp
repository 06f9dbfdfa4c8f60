#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gpstack {

struct ArchRankRow {
    std::string arch;
    std::int64_t rank = 0;
};

// Training/truth CSV with header "arch,<rank_header>".
std::vector<ArchRankRow> read_arch_rank_csv(const std::filesystem::path& path,
                                            const std::string& rank_header = "rank");

// Inference CSV with header "arch".
std::vector<std::string> read_arch_csv(const std::filesystem::path& path);

void write_arch_rank_csv(const std::filesystem::path& path,
                         const std::vector<ArchRankRow>& rows,
                         const std::string& rank_header = "rank");

void write_arch_csv(const std::filesystem::path& path, const std::vector<std::string>& archs);

// Shortest round-trip decimal formatting for doubles.
std::string format_double(double v);

// Writes via a temp file in the same directory, then renames.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

} // namespace gpstack
