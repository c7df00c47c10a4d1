#include "nv2d/grid.hpp"

namespace nv2d {

namespace {

// Stencil base and weights along one axis; returns false if every stencil
// node falls outside the grid.
inline bool axis_setup(double coord, double origin, double h, int n, int& base, double w[4]) {
    const double fx = (coord - origin) / h;
    if (fx <= -2.0 || fx >= n + 1.0) return false;
    int i = static_cast<int>(std::floor(fx));
    cubic_weights(fx - i, w);
    base = i - 1;
    return true;
}

} // namespace

double interp4_cubic(const Grid4D& f, Vec2 x, Vec2 p) {
    const GridSpec2D& xs = f.xspec();
    const GridSpec2D& ps = f.pspec();
    int bx1, bx2, bp1, bp2;
    double wx1[4], wx2[4], wp1[4], wp2[4];
    if (!axis_setup(x.x, xs.origin.x, xs.h, xs.nx, bx1, wx1)) return 0.0;
    if (!axis_setup(x.y, xs.origin.y, xs.h, xs.ny, bx2, wx2)) return 0.0;
    if (!axis_setup(p.x, ps.origin.x, ps.h, ps.nx, bp1, wp1)) return 0.0;
    if (!axis_setup(p.y, ps.origin.y, ps.h, ps.ny, bp2, wp2)) return 0.0;

    const bool interior = bx1 >= 0 && bx1 + 3 < xs.nx && bx2 >= 0 && bx2 + 3 < xs.ny &&
                          bp1 >= 0 && bp1 + 3 < ps.nx && bp2 >= 0 && bp2 + 3 < ps.ny;
    const int np2 = ps.ny;
    double acc = 0.0;
    if (interior) {
        for (int a = 0; a < 4; ++a) {
            double sa = 0.0;
            for (int b = 0; b < 4; ++b) {
                const double* slab = f.pslice(bx1 + a, bx2 + b);
                double sb = 0.0;
                for (int c = 0; c < 4; ++c) {
                    const double* row = slab + (bp1 + c) * np2 + bp2;
                    sb += wp1[c] *
                          (wp2[0] * row[0] + wp2[1] * row[1] + wp2[2] * row[2] + wp2[3] * row[3]);
                }
                sa += wx2[b] * sb;
            }
            acc += wx1[a] * sa;
        }
        return acc;
    }
    // boundary path: out-of-grid nodes contribute zero
    for (int a = 0; a < 4; ++a) {
        const int i1 = bx1 + a;
        if (i1 < 0 || i1 >= xs.nx) continue;
        double sa = 0.0;
        for (int b = 0; b < 4; ++b) {
            const int i2 = bx2 + b;
            if (i2 < 0 || i2 >= xs.ny) continue;
            const double* slab = f.pslice(i1, i2);
            double sb = 0.0;
            for (int c = 0; c < 4; ++c) {
                const int i3 = bp1 + c;
                if (i3 < 0 || i3 >= ps.nx) continue;
                double sc = 0.0;
                for (int dd = 0; dd < 4; ++dd) {
                    const int i4 = bp2 + dd;
                    if (i4 < 0 || i4 >= ps.ny) continue;
                    sc += wp2[dd] * slab[i3 * np2 + i4];
                }
                sb += wp1[c] * sc;
            }
            sa += wx2[b] * sb;
        }
        acc += wx1[a] * sa;
    }
    return acc;
}

} // namespace nv2d
