#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gpstack/errors.hpp"

namespace gpstack {

// Describes the token layout of an architecture string: one depth
// symbol, then max_layers pairs of (heads code, mlp-ratio code), each
// code in {0,1,2,3} with 0 reserved for trailing padding, optionally
// followed by a single embed-dim code.
struct SearchSpaceSchema {
    int max_layers = 12;
    std::vector<char> depth_symbols = {'j', 'k', 'l'};
    bool includes_embed_column = false;

    // Ordinal of a depth symbol: 1-based position in depth_symbols.
    int depth_ordinal(char symbol) const;

    // Number of non-padding layers implied by a depth symbol. The last
    // symbol uses all max_layers layers, each earlier symbol one fewer.
    int active_layers(char symbol) const;

    int num_depth_symbols() const { return static_cast<int>(depth_symbols.size()); }

    // Expected token-string length.
    std::size_t text_length() const {
        return 1 + 2 * static_cast<std::size_t>(max_layers) + (includes_embed_column ? 1 : 0);
    }

    void validate() const;
};

// One sub-network drawn from the search space, in token form.
struct RawArchitecture {
    char depth_code = 0;
    std::vector<std::pair<int, int>> layer_tokens; // (heads, mlp), length max_layers
    std::optional<int> embed_code;

    int active_layer_count() const {
        int n = 0;
        for (const auto& [h, m] : layer_tokens) {
            if (h == 0 && m == 0) break;
            ++n;
        }
        return n;
    }

    bool operator==(const RawArchitecture&) const = default;
};

// Parses a token string. Throws ParseError with position context on
// malformed input and validates the padding block against the depth.
RawArchitecture parse_architecture(const std::string& text, const SearchSpaceSchema& schema);

// Inverse of parse_architecture on valid records.
std::string format_architecture(const RawArchitecture& arch, const SearchSpaceSchema& schema);

// Full structural validation (parse enforces the same rules).
void validate_architecture(const RawArchitecture& arch, const SearchSpaceSchema& schema);

} // namespace gpstack
