#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpstack/schema.hpp"

namespace gpstack {

// Synthetic supernet-ranking task generator. The hidden effect model
// scores each architecture with a linear term, sparse pairwise
// interactions and a mild tanh nonlinearity; observed scores add
// Gaussian noise, and labels are the within-split rank order of the
// observed scores.
struct TaskGenerator {
    SearchSpaceSchema schema;
    std::size_t n_train = 500;
    std::size_t n_test = 2000;      // desk-scale default; full scale is 99500
    double noise_sd = 0.5;
    double interaction_scale = 0.4;
    std::size_t n_interactions = 8;
    double nonlinearity = 0.5;
    std::uint64_t seed = 1;
};

struct LabeledArch {
    RawArchitecture arch;
    std::int64_t rank = 0;
};

struct SyntheticTask {
    std::string task_id;
    std::vector<LabeledArch> train;
    std::vector<LabeledArch> test;
    // Diagnostics only; never fed to models. Aligned with train then
    // test rows, in order.
    std::vector<double> true_latent;
    std::vector<double> observed_latent;
};

// Number of valid architectures in the schema's space, saturating at
// uint64 max for spaces too large to count.
std::uint64_t space_size(const SearchSpaceSchema& schema);

// Uniform sample of distinct valid architectures. Small spaces are
// enumerated and shuffled; large spaces use rejection of duplicates.
std::vector<RawArchitecture> sample_architectures(const SearchSpaceSchema& schema,
                                                  std::size_t count, std::uint64_t seed);

// Per-task generator defaults: the eight default tasks differ in
// noise level, interaction count and nonlinearity strength.
TaskGenerator default_task_generator(const SearchSpaceSchema& schema, int task_index,
                                     std::uint64_t base_seed, std::size_t n_train,
                                     std::size_t n_test, double noise_scale = 1.0);

SyntheticTask gen_task(const TaskGenerator& gen, const std::string& task_id);

} // namespace gpstack
