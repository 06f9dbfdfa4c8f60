#include "gpstack/encoding.hpp"

namespace gpstack {

std::vector<std::string> ordinal_column_names(const SearchSpaceSchema& schema) {
    std::vector<std::string> names;
    names.reserve(1 + 2 * static_cast<std::size_t>(schema.max_layers));
    names.emplace_back("depth");
    for (int layer = 1; layer <= schema.max_layers; ++layer) {
        names.push_back("layer" + std::to_string(layer) + "_heads");
        names.push_back("layer" + std::to_string(layer) + "_mlp");
    }
    return names;
}

std::vector<std::string> onehot_column_names(const SearchSpaceSchema& schema) {
    std::vector<std::string> names;
    for (char s : schema.depth_symbols) names.push_back(std::string("depth_") + s);
    for (int layer = 1; layer <= schema.max_layers; ++layer) {
        for (const char* token : {"heads", "mlp"}) {
            for (int code = 0; code <= 3; ++code) {
                names.push_back("layer" + std::to_string(layer) + "_" + token + "_" +
                                std::to_string(code));
            }
        }
    }
    return names;
}

FeatureVector encode_ordinal(const RawArchitecture& arch, const SearchSpaceSchema& schema) {
    validate_architecture(arch, schema);
    FeatureVector fv;
    fv.column_names = ordinal_column_names(schema);
    fv.values.reserve(fv.column_names.size());
    fv.values.push_back(static_cast<double>(schema.depth_ordinal(arch.depth_code)) - 2.0);
    for (const auto& [heads, mlp] : arch.layer_tokens) {
        // Padding 0 carries neutral information: read it as code 2.
        const int h = heads == 0 ? 2 : heads;
        const int m = mlp == 0 ? 2 : mlp;
        fv.values.push_back(static_cast<double>(h) - 2.0);
        fv.values.push_back(static_cast<double>(m) - 2.0);
    }
    return fv;
}

FeatureVector encode_onehot(const RawArchitecture& arch, const SearchSpaceSchema& schema) {
    validate_architecture(arch, schema);
    FeatureVector fv;
    fv.column_names = onehot_column_names(schema);
    fv.values.assign(fv.column_names.size(), 0.0);

    const int ord = schema.depth_ordinal(arch.depth_code);
    fv.values[static_cast<std::size_t>(ord - 1)] = 1.0;

    std::size_t offset = schema.depth_symbols.size();
    for (const auto& [heads, mlp] : arch.layer_tokens) {
        fv.values[offset + static_cast<std::size_t>(heads)] = 1.0;
        offset += 4;
        fv.values[offset + static_cast<std::size_t>(mlp)] = 1.0;
        offset += 4;
    }
    return fv;
}

Matrix encode_dataset(const std::vector<RawArchitecture>& archs, const SearchSpaceSchema& schema,
                      EncodingKind kind) {
    const auto names =
        kind == EncodingKind::Ordinal ? ordinal_column_names(schema) : onehot_column_names(schema);
    Matrix m(archs.size(), names.size());
    for (std::size_t i = 0; i < archs.size(); ++i) {
        const FeatureVector fv = kind == EncodingKind::Ordinal
                                     ? encode_ordinal(archs[i], schema)
                                     : encode_onehot(archs[i], schema);
        for (std::size_t j = 0; j < fv.values.size(); ++j) m(i, j) = fv.values[j];
    }
    return m;
}

Matrix ColumnMask::apply(const Matrix& m) const {
    m.require_cols(input_width, "ColumnMask::apply");
    Matrix out(m.rows(), kept.size());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < kept.size(); ++j) out(i, j) = m(i, kept[j]);
    }
    return out;
}

ColumnMask drop_constant_columns(const Matrix& m, const std::vector<std::string>& column_names,
                                 double variance_tolerance) {
    if (m.rows() == 0) throw DataError("drop_constant_columns: empty dataset");
    if (column_names.size() != m.cols())
        throw DataError("drop_constant_columns: column name count mismatch");

    ColumnMask mask;
    mask.input_width = m.cols();
    const double n = static_cast<double>(m.rows());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) mean += m(i, j);
        mean /= n;
        double var = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const double d = m(i, j) - mean;
            var += d * d;
        }
        var /= n;
        if (var < variance_tolerance) {
            mask.dropped_names.push_back(column_names[j]);
        } else {
            mask.kept.push_back(j);
            mask.kept_names.push_back(column_names[j]);
        }
    }
    if (mask.kept.empty())
        throw DataError("drop_constant_columns: all columns constant, dataset is degenerate");
    return mask;
}

} // namespace gpstack
