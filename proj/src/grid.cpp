#include "weakoam/grid.hpp"

#include <cmath>
#include <string>

#include "weakoam/error.hpp"
#include "weakoam/kernels.hpp"

namespace weakoam {

GridSpec GridSpec::make(int n, double half_extent) {
    if (n < kMinGridPoints || n % 2 != 0) {
        throw Error(ErrorCode::BadGrid, "grid needs an even point count >= 64, got " + std::to_string(n));
    }
    if (!(half_extent > 0.0) || !std::isfinite(half_extent)) {
        throw Error(ErrorCode::BadGrid, "grid half extent must be positive");
    }
    return GridSpec(n, half_extent);
}

GridField::GridField(GridSpec grid, std::vector<cplx> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw Error(ErrorCode::BadShape, "field has " + std::to_string(values_.size()) + " values, grid needs " +
                                             std::to_string(grid_.size()));
    }
    norm_ = kernels::parallel::moment(grid_, values_, values_).real();
}

GridField GridField::normalized() const {
    if (!(norm_ > 0.0)) {
        throw Error(ErrorCode::PostselectionTooRare, "cannot normalize a zero field");
    }
    std::vector<cplx> scaled = values_;
    kernels::parallel::scale(1.0 / std::sqrt(norm_), scaled);
    return GridField(grid_, std::move(scaled));
}

}  // namespace weakoam
