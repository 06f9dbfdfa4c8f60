#include "gpstack/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "gpstack/encoding.hpp"
#include "gpstack/errors.hpp"
#include "gpstack/rng.hpp"

namespace gpstack {

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
    return a * b;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

// 9^active, the number of (heads, mlp) assignments for one depth.
std::uint64_t layer_combinations(int active_layers) {
    std::uint64_t total = 1;
    for (int i = 0; i < active_layers; ++i) total = saturating_mul(total, 9);
    return total;
}

} // namespace

std::uint64_t space_size(const SearchSpaceSchema& schema) {
    schema.validate();
    std::uint64_t total = 0;
    for (char symbol : schema.depth_symbols)
        total = saturating_add(total, layer_combinations(schema.active_layers(symbol)));
    return total;
}

namespace {

RawArchitecture random_architecture(const SearchSpaceSchema& schema, Rng& rng) {
    // Depth weighted by the size of its layer sub-space so the draw is
    // uniform over architectures, not over depth symbols.
    std::vector<std::uint64_t> weights;
    std::uint64_t total = 0;
    for (char symbol : schema.depth_symbols) {
        const std::uint64_t w = layer_combinations(schema.active_layers(symbol));
        weights.push_back(w);
        total = saturating_add(total, w);
    }
    std::uint64_t pick = rng.next_below(total);
    std::size_t depth_idx = 0;
    while (depth_idx + 1 < weights.size() && pick >= weights[depth_idx]) {
        pick -= weights[depth_idx];
        ++depth_idx;
    }

    RawArchitecture arch;
    arch.depth_code = schema.depth_symbols[depth_idx];
    const int active = schema.active_layers(arch.depth_code);
    arch.layer_tokens.resize(static_cast<std::size_t>(schema.max_layers), {0, 0});
    for (int layer = 0; layer < active; ++layer) {
        arch.layer_tokens[static_cast<std::size_t>(layer)] = {
            static_cast<int>(rng.next_below(3)) + 1, static_cast<int>(rng.next_below(3)) + 1};
    }
    if (schema.includes_embed_column) arch.embed_code = static_cast<int>(rng.next_below(4));
    return arch;
}

void enumerate_space(const SearchSpaceSchema& schema, std::vector<RawArchitecture>& out) {
    for (char symbol : schema.depth_symbols) {
        const int active = schema.active_layers(symbol);
        std::vector<int> codes(static_cast<std::size_t>(2 * active), 1);
        for (;;) {
            RawArchitecture arch;
            arch.depth_code = symbol;
            arch.layer_tokens.resize(static_cast<std::size_t>(schema.max_layers), {0, 0});
            for (int layer = 0; layer < active; ++layer) {
                arch.layer_tokens[static_cast<std::size_t>(layer)] = {
                    codes[static_cast<std::size_t>(2 * layer)],
                    codes[static_cast<std::size_t>(2 * layer + 1)]};
            }
            if (schema.includes_embed_column) arch.embed_code = 0;
            out.push_back(std::move(arch));

            // Odometer increment over codes in {1,2,3}.
            std::size_t pos = 0;
            while (pos < codes.size() && codes[pos] == 3) codes[pos++] = 1;
            if (pos == codes.size()) break;
            ++codes[pos];
        }
    }
}

} // namespace

std::vector<RawArchitecture> sample_architectures(const SearchSpaceSchema& schema,
                                                  std::size_t count, std::uint64_t seed) {
    schema.validate();
    const std::uint64_t space = space_size(schema);
    if (count > space)
        throw DataError("sample_architectures: requested " + std::to_string(count) +
                        " distinct architectures from a space of " + std::to_string(space));
    Rng rng(seed);

    // Note: embed columns multiply the space by 4 but the embed code is
    // dropped downstream, so distinctness is defined over the non-embed
    // tokens and the space size above deliberately ignores embed.
    constexpr std::uint64_t kEnumerationLimit = 1u << 20;
    if (space <= kEnumerationLimit) {
        std::vector<RawArchitecture> all;
        all.reserve(space);
        enumerate_space(schema, all);
        rng.shuffle(all);
        all.resize(count);
        if (schema.includes_embed_column)
            for (auto& arch : all) arch.embed_code = static_cast<int>(rng.next_below(4));
        return all;
    }

    std::vector<RawArchitecture> out;
    out.reserve(count);
    std::unordered_set<std::string> seen;
    seen.reserve(count * 2);
    while (out.size() < count) {
        RawArchitecture arch = random_architecture(schema, rng);
        std::string key = format_architecture(arch, schema);
        if (schema.includes_embed_column) key.pop_back(); // distinctness ignores embed
        if (seen.insert(std::move(key)).second) out.push_back(std::move(arch));
    }
    return out;
}

TaskGenerator default_task_generator(const SearchSpaceSchema& schema, int task_index,
                                     std::uint64_t base_seed, std::size_t n_train,
                                     std::size_t n_test, double noise_scale) {
    // Eight noise/shape profiles echoing how differently the real tasks
    // behave: some near-linear, some strongly interactive or highly
    // nonlinear, distinct signal-to-noise ratios. Indices beyond 7 wrap.
    static constexpr double kNoise[8] = {0.28, 0.50, 0.36, 0.62, 0.32, 0.55, 0.40, 0.46};
    static constexpr std::size_t kInteractions[8] = {3, 14, 6, 16, 4, 10, 8, 12};
    static constexpr double kNonlinearity[8] = {0.10, 1.10, 0.30, 1.20, 0.15, 0.80, 0.50, 1.00};

    TaskGenerator gen;
    gen.schema = schema;
    gen.n_train = n_train;
    gen.n_test = n_test;
    const int profile = ((task_index % 8) + 8) % 8;
    gen.noise_sd = kNoise[profile] * noise_scale;
    gen.n_interactions = kInteractions[profile];
    gen.nonlinearity = kNonlinearity[profile];
    gen.interaction_scale = 0.65;
    gen.seed = derive_seed(base_seed, "task-" + std::to_string(task_index));
    return gen;
}

namespace {

// Ranks within one split: ascending observed latent, ties broken by
// the architecture's lexical token order.
void assign_ranks(std::vector<LabeledArch>& split, std::span<const double> observed,
                  const SearchSpaceSchema& schema) {
    const std::size_t n = split.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::vector<std::string> keys(n);
    for (std::size_t i = 0; i < n; ++i) keys[i] = format_architecture(split[i].arch, schema);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (observed[a] != observed[b]) return observed[a] < observed[b];
        return keys[a] < keys[b];
    });
    for (std::size_t pos = 0; pos < n; ++pos) split[order[pos]].rank = static_cast<std::int64_t>(pos);
}

} // namespace

SyntheticTask gen_task(const TaskGenerator& gen, const std::string& task_id) {
    gen.schema.validate();
    if (gen.n_train < 2 || gen.n_test < 2)
        throw DataError("gen_task: splits need at least 2 rows each");
    if (gen.noise_sd < 0.0) throw ConfigError("gen_task: noise_sd must be >= 0");

    const std::size_t total = gen.n_train + gen.n_test;
    const std::vector<RawArchitecture> archs =
        sample_architectures(gen.schema, total, derive_seed(gen.seed, "sample"));

    const Matrix x = encode_dataset(archs, gen.schema, EncodingKind::Ordinal);
    const std::size_t dim = x.cols();

    // Effect model weights.
    Rng weight_rng(derive_seed(gen.seed, "weights"));
    std::vector<double> linear(dim);
    for (auto& w : linear) w = weight_rng.next_normal();
    linear[0] *= 2.0; // depth carries real signal

    struct Interaction {
        std::size_t a, b;
        double w;
    };
    std::vector<Interaction> interactions;
    interactions.reserve(gen.n_interactions);
    for (std::size_t p = 0; p < gen.n_interactions; ++p) {
        const std::size_t a = static_cast<std::size_t>(weight_rng.next_below(dim));
        std::size_t b = static_cast<std::size_t>(weight_rng.next_below(dim));
        if (b == a) b = (b + 1) % dim;
        interactions.push_back({a, b, weight_rng.next_normal() * gen.interaction_scale});
    }
    std::vector<double> tanh_w(dim);
    for (auto& w : tanh_w) w = weight_rng.next_normal();

    // Raw scores, standardized over the whole drawn sample so noise_sd
    // is relative to unit signal.
    std::vector<double> raw(total);
    for (std::size_t i = 0; i < total; ++i) {
        double lin = 0.0, proj = 0.0;
        for (std::size_t jf = 0; jf < dim; ++jf) {
            lin += linear[jf] * x(i, jf);
            proj += tanh_w[jf] * x(i, jf);
        }
        double inter = 0.0;
        for (const Interaction& t : interactions) inter += t.w * x(i, t.a) * x(i, t.b);
        // Steep enough that the ridge term saturates: shallow trees
        // cannot linearize it away.
        raw[i] = lin + inter +
                 gen.nonlinearity *
                     std::tanh(2.5 * proj / std::sqrt(static_cast<double>(dim)));
    }
    double mean = 0.0;
    for (double v : raw) mean += v;
    mean /= static_cast<double>(total);
    double var = 0.0;
    for (double v : raw) var += (v - mean) * (v - mean);
    var /= static_cast<double>(total);
    const double sd = var > 0.0 ? std::sqrt(var) : 1.0;

    SyntheticTask task;
    task.task_id = task_id;
    task.true_latent.resize(total);
    task.observed_latent.resize(total);
    Rng noise_rng(derive_seed(gen.seed, "noise"));
    for (std::size_t i = 0; i < total; ++i) {
        task.true_latent[i] = (raw[i] - mean) / sd;
        task.observed_latent[i] = task.true_latent[i] + gen.noise_sd * noise_rng.next_normal();
    }

    task.train.resize(gen.n_train);
    for (std::size_t i = 0; i < gen.n_train; ++i) task.train[i].arch = archs[i];
    task.test.resize(gen.n_test);
    for (std::size_t i = 0; i < gen.n_test; ++i) task.test[i].arch = archs[gen.n_train + i];

    assign_ranks(task.train, std::span(task.observed_latent).subspan(0, gen.n_train),
                 gen.schema);
    assign_ranks(task.test, std::span(task.observed_latent).subspan(gen.n_train), gen.schema);
    return task;
}

} // namespace gpstack
