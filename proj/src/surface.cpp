#include "quadevo/surface.hpp"

namespace quadevo {

namespace {
bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }
}  // namespace

bool SurfaceModel::valid() const {
    return !name.empty() && in_unit(hardness) && in_unit(roughness) && in_unit(friction) &&
           sinkage_gain >= 0.0 && noise_gain >= 0.0;
}

std::array<SurfaceModel, 4> surface_library() {
    SurfaceModel a{"A", 0.95, 0.05};
    SurfaceModel b{"B", 0.25, 0.05};
    SurfaceModel c{"C", 0.95, 0.75};
    SurfaceModel d{"D", 0.25, 0.75};
    return {a, b, c, d};
}

}  // namespace quadevo
