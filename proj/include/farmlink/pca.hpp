#pragma once

#include <string>
#include <vector>

#include "farmlink/matrix.hpp"
#include "farmlink/table.hpp"

namespace farmlink {

/// Principal-component model: column means of the fitting data, a d x r
/// component matrix with orthonormal columns, and the explained variance of
/// each component in non-increasing order.
struct PcaModel {
    std::vector<double> means;
    Matrix components; // d x r, components are columns
    std::vector<double> variances;

    std::size_t input_dim() const noexcept { return components.rows(); }
    std::size_t rank() const noexcept { return components.cols(); }
};

/// A table's rows in component space, pseudonyms carried through.
struct ProjectedMatrix {
    std::vector<std::string> pseudonyms;
    Matrix scores; // n x r
};

/// Top-r eigenpairs of the sample covariance (divisor n-1) of the table.
/// Sign convention: each component's largest-magnitude entry is positive;
/// equal eigenvalues are ordered by the sign-fixed vectors lexicographically,
/// so the model bytes are deterministic.
PcaModel fit_pca(const FeatureTable& table, std::size_t r);

/// scores = (values - means) * components.
ProjectedMatrix project(const PcaModel& model, const FeatureTable& table);

/// Wire encoding: {"means":[...],"components":[[...]],"variances":[...]},
/// components row-major. Decoding validates shape, ordering, and column
/// orthonormality.
std::string pca_model_to_json(const PcaModel& model);
PcaModel pca_model_from_json(const std::string& payload);

namespace detail {

struct EigenResult {
    std::vector<double> values;  // unsorted
    Matrix vectors;              // eigenvectors are columns, matching values
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
EigenResult symmetric_eigen(Matrix a);

} // namespace detail

} // namespace farmlink
