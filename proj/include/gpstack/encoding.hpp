#pragma once

#include <string>
#include <vector>

#include "gpstack/matrix.hpp"
#include "gpstack/schema.hpp"

namespace gpstack {

// Dense feature vector with aligned column labels.
struct FeatureVector {
    std::vector<double> values;
    std::vector<std::string> column_names;
};

enum class EncodingKind {
    Ordinal,
    OneHot,
};

// Ordinal encoding: depth symbol to its ordinal, padding code 0 read
// as the neutral value 2, every code shifted by -2 so {1,2,3} lands on
// {-1,0,+1}. The embed column, when present, is dropped.
FeatureVector encode_ordinal(const RawArchitecture& arch, const SearchSpaceSchema& schema);

// One-hot encoding: the depth symbol expands to one indicator column
// per symbol, each layer code to four indicator columns (codes 0-3,
// padding included). Exactly one 1 per block. Embed dropped.
FeatureVector encode_onehot(const RawArchitecture& arch, const SearchSpaceSchema& schema);

std::vector<std::string> ordinal_column_names(const SearchSpaceSchema& schema);
std::vector<std::string> onehot_column_names(const SearchSpaceSchema& schema);

// Encode a batch into a matrix (rows in input order).
Matrix encode_dataset(const std::vector<RawArchitecture>& archs, const SearchSpaceSchema& schema,
                      EncodingKind kind = EncodingKind::Ordinal);

// Column mask produced at train time and replayed at predict time.
struct ColumnMask {
    std::size_t input_width = 0;
    std::vector<std::size_t> kept;        // indices into the unreduced columns
    std::vector<std::string> kept_names;
    std::vector<std::string> dropped_names;

    Matrix apply(const Matrix& m) const;
};

// Removes every column whose sample variance is below tolerance.
// Throws DataError if the dataset is empty or every column is constant.
ColumnMask drop_constant_columns(const Matrix& m, const std::vector<std::string>& column_names,
                                 double variance_tolerance = 1e-12);

} // namespace gpstack
