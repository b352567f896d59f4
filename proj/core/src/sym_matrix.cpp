#include "covsmooth/sym_matrix.hpp"

#include <string>

#include "covsmooth/errors.hpp"

namespace covsmooth {

SymMatrix::SymMatrix(std::size_t dim) : n_(dim) {
    if (n_ < 1) {
        throw DegenerateInputError("matrix dimension must be at least 1");
    }
    data_.assign(n_ * (n_ - 1) / 2, 0.0);
}

void SymMatrix::set(std::size_t i, std::size_t j, double value) {
    if (i == j) {
        throw InvalidArgumentError("diagonal of a SymMatrix is structurally zero");
    }
    if (i >= n_ || j >= n_) {
        throw InvalidArgumentError("SymMatrix index (" + std::to_string(i) + ", " +
                                   std::to_string(j) + ") out of range");
    }
    data_[pack_index(i, j)] = value;
}

SymMatrix center_offdiag(const SymMatrix& m) {
    if (m.dim() < 2) {
        throw DegenerateInputError("centering needs at least two nodes");
    }
    double sum = 0.0;
    for (double v : m.packed()) sum += v;
    const double avg = sum / static_cast<double>(m.pair_count());

    SymMatrix result(m.dim());
    auto out = result.packed();
    auto in = m.packed();
    for (std::size_t k = 0; k < in.size(); ++k) out[k] = in[k] - avg;
    return result;
}

} // namespace covsmooth
