#include "gpstack/schema.hpp"

#include <algorithm>
#include <set>

namespace gpstack {

void SearchSpaceSchema::validate() const {
    if (max_layers < 1) throw ConfigError("schema: max_layers must be >= 1");
    if (depth_symbols.empty()) throw ConfigError("schema: depth_symbols must be non-empty");
    std::set<char> seen(depth_symbols.begin(), depth_symbols.end());
    if (seen.size() != depth_symbols.size())
        throw ConfigError("schema: depth_symbols must be duplicate-free");
    if (static_cast<int>(depth_symbols.size()) > max_layers)
        throw ConfigError("schema: more depth symbols than layers");
}

int SearchSpaceSchema::depth_ordinal(char symbol) const {
    auto it = std::find(depth_symbols.begin(), depth_symbols.end(), symbol);
    if (it == depth_symbols.end())
        throw DataError(std::string("unknown depth symbol '") + symbol + "'");
    return static_cast<int>(it - depth_symbols.begin()) + 1;
}

int SearchSpaceSchema::active_layers(char symbol) const {
    return max_layers - (num_depth_symbols() - depth_ordinal(symbol));
}

namespace {

int digit_at(const std::string& text, std::size_t pos) {
    char c = text[pos];
    if (c < '0' || c > '3') {
        throw ParseError("position " + std::to_string(pos) + ": digit '" + std::string(1, c) +
                         "' out of domain {0,1,2,3}");
    }
    return c - '0';
}

} // namespace

RawArchitecture parse_architecture(const std::string& text, const SearchSpaceSchema& schema) {
    schema.validate();
    if (text.size() != schema.text_length()) {
        throw ParseError("architecture string has length " + std::to_string(text.size()) +
                         ", expected " + std::to_string(schema.text_length()));
    }

    RawArchitecture arch;
    arch.depth_code = text[0];
    const int active = schema.active_layers(arch.depth_code); // throws on unknown symbol

    arch.layer_tokens.reserve(schema.max_layers);
    for (int layer = 0; layer < schema.max_layers; ++layer) {
        const std::size_t pos = 1 + 2 * static_cast<std::size_t>(layer);
        arch.layer_tokens.emplace_back(digit_at(text, pos), digit_at(text, pos + 1));
    }
    if (schema.includes_embed_column) {
        arch.embed_code = digit_at(text, text.size() - 1);
    }

    // Padding must be a contiguous trailing block of (0,0) pairs whose
    // start matches the depth symbol's active layer count.
    for (int layer = 0; layer < schema.max_layers; ++layer) {
        const auto& [heads, mlp] = arch.layer_tokens[layer];
        if (layer < active) {
            if (heads == 0 || mlp == 0) {
                throw ParseError("layer " + std::to_string(layer + 1) +
                                 ": padding code 0 inside active region (depth '" +
                                 std::string(1, arch.depth_code) + "' implies " +
                                 std::to_string(active) + " active layers)");
            }
        } else {
            if (heads != 0 || mlp != 0) {
                throw ParseError("layer " + std::to_string(layer + 1) +
                                 ": expected (0,0) padding after " + std::to_string(active) +
                                 " active layers, got (" + std::to_string(heads) + "," +
                                 std::to_string(mlp) + ")");
            }
        }
    }
    return arch;
}

std::string format_architecture(const RawArchitecture& arch, const SearchSpaceSchema& schema) {
    validate_architecture(arch, schema);
    std::string out;
    out.reserve(schema.text_length());
    out.push_back(arch.depth_code);
    for (const auto& [heads, mlp] : arch.layer_tokens) {
        out.push_back(static_cast<char>('0' + heads));
        out.push_back(static_cast<char>('0' + mlp));
    }
    if (schema.includes_embed_column) {
        out.push_back(static_cast<char>('0' + arch.embed_code.value_or(0)));
    }
    return out;
}

void validate_architecture(const RawArchitecture& arch, const SearchSpaceSchema& schema) {
    schema.validate();
    const int active = schema.active_layers(arch.depth_code);
    if (arch.layer_tokens.size() != static_cast<std::size_t>(schema.max_layers))
        throw DataError("architecture has " + std::to_string(arch.layer_tokens.size()) +
                        " layer token pairs, schema expects " + std::to_string(schema.max_layers));
    for (int layer = 0; layer < schema.max_layers; ++layer) {
        const auto& [heads, mlp] = arch.layer_tokens[layer];
        const bool is_padding = layer >= active;
        if (is_padding) {
            if (heads != 0 || mlp != 0)
                throw DataError("layer " + std::to_string(layer + 1) + ": expected padding");
        } else {
            auto in_domain = [](int c) { return c >= 1 && c <= 3; };
            if (!in_domain(heads) || !in_domain(mlp))
                throw DataError("layer " + std::to_string(layer + 1) + ": code out of {1,2,3}");
        }
    }
    if (schema.includes_embed_column) {
        if (!arch.embed_code || *arch.embed_code < 0 || *arch.embed_code > 3)
            throw DataError("embed code missing or out of {0,1,2,3}");
    }
}

} // namespace gpstack
