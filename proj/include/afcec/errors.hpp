#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace afcec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

class RankDeficient : public Error {
public:
    using Error::Error;
};

/// A cluster whose covariance stays singular after regularization.
class DegenerateCluster : public Error {
public:
    using Error::Error;
};

class AllClustersDegenerate : public Error {
public:
    using Error::Error;
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

class InvalidConvention : public Error {
public:
    using Error::Error;
};

class InvalidSpec : public Error {
public:
    using Error::Error;
};

/// Point lies on the concave side at or beyond the centre of curvature,
/// where the arc-length/normal-distance map folds.
class BeyondCurvatureCenter : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class SchemaVersionMismatch : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t row, std::size_t col, const std::string& what)
        : Error("parse error at row " + std::to_string(row) + ", column " + std::to_string(col) +
                ": " + what),
          row_(row),
          col_(col) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

}  // namespace afcec
