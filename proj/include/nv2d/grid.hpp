#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

#include "nv2d/vec2.hpp"

namespace nv2d {

// Uniform tensor grid on [origin, origin + h*(n-1)] per axis, nodes at both ends.
struct GridSpec2D {
    Vec2 origin{0.0, 0.0};
    double h = 1.0;
    int nx = 0; // nodes along axis 1
    int ny = 0; // nodes along axis 2

    Vec2 node(int i, int j) const { return {origin.x + h * i, origin.y + h * j}; }
    Vec2 upper() const { return {origin.x + h * (nx - 1), origin.y + h * (ny - 1)}; }
    std::size_t count() const { return static_cast<std::size_t>(nx) * ny; }

    bool conformant(const GridSpec2D& o) const {
        return nx == o.nx && ny == o.ny && h == o.h && origin.x == o.origin.x &&
               origin.y == o.origin.y;
    }

    // Symmetric box [-L, L]^2 with n nodes per axis.
    static GridSpec2D centered_box(double half_width, int n) {
        GridSpec2D s;
        s.origin = {-half_width, -half_width};
        s.h = 2.0 * half_width / (n - 1);
        s.nx = s.ny = n;
        return s;
    }
};

// Row-major scalar samples on a GridSpec2D (axis-1 index slow, axis-2 fast).
class Grid2D {
  public:
    Grid2D() = default;
    explicit Grid2D(const GridSpec2D& spec, double fill = 0.0)
        : spec_(spec), data_(spec.count(), fill) {}

    const GridSpec2D& spec() const { return spec_; }
    double& at(int i, int j) { return data_[static_cast<std::size_t>(i) * spec_.ny + j]; }
    double at(int i, int j) const { return data_[static_cast<std::size_t>(i) * spec_.ny + j]; }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::size_t size() const { return data_.size(); }

    // Bilinear interpolation; zero outside the grid (fields of interest are
    // compactly supported away from the box edge).
    double interp(Vec2 x) const {
        const double fx = (x.x - spec_.origin.x) / spec_.h;
        const double fy = (x.y - spec_.origin.y) / spec_.h;
        if (fx < 0.0 || fy < 0.0 || fx > spec_.nx - 1 || fy > spec_.ny - 1) return 0.0;
        int i = static_cast<int>(fx);
        int j = static_cast<int>(fy);
        if (i >= spec_.nx - 1) i = spec_.nx - 2;
        if (j >= spec_.ny - 1) j = spec_.ny - 2;
        const double ax = fx - i;
        const double ay = fy - j;
        const double f00 = at(i, j), f01 = at(i, j + 1);
        const double f10 = at(i + 1, j), f11 = at(i + 1, j + 1);
        return (1.0 - ax) * ((1.0 - ay) * f00 + ay * f01) + ax * ((1.0 - ay) * f10 + ay * f11);
    }

  private:
    GridSpec2D spec_;
    std::vector<double> data_;
};

// Pair of scalar grids treated as a 2-vector field.
struct VecGrid2D {
    Grid2D c1;
    Grid2D c2;

    VecGrid2D() = default;
    explicit VecGrid2D(const GridSpec2D& spec) : c1(spec), c2(spec) {}
    Vec2 at(int i, int j) const { return {c1.at(i, j), c2.at(i, j)}; }
    Vec2 interp(Vec2 x) const { return {c1.interp(x), c2.interp(x)}; }
};

// f(x1, x2, p1, p2) on a tensor product of a spatial and a momentum grid.
// Layout: ((ix1 * nx2 + ix2) * np1 + ip1) * np2 + ip2.
class Grid4D {
  public:
    Grid4D() = default;
    Grid4D(const GridSpec2D& xspec, const GridSpec2D& pspec)
        : xspec_(xspec), pspec_(pspec),
          data_(xspec.count() * pspec.count(), 0.0) {}

    const GridSpec2D& xspec() const { return xspec_; }
    const GridSpec2D& pspec() const { return pspec_; }

    std::size_t index(int ix, int jx, int ip, int jp) const {
        return ((static_cast<std::size_t>(ix) * xspec_.ny + jx) * pspec_.nx + ip) * pspec_.ny +
               jp;
    }
    double& at(int ix, int jx, int ip, int jp) { return data_[index(ix, jx, ip, jp)]; }
    double at(int ix, int jx, int ip, int jp) const { return data_[index(ix, jx, ip, jp)]; }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::size_t size() const { return data_.size(); }

    // Momentum-plane slice at spatial node (ix, jx): contiguous np1*np2 block.
    const double* pslice(int ix, int jx) const { return data_.data() + index(ix, jx, 0, 0); }
    double* pslice(int ix, int jx) { return data_.data() + index(ix, jx, 0, 0); }

  private:
    GridSpec2D xspec_;
    GridSpec2D pspec_;
    std::vector<double> data_;
};

// Cubic Lagrange weights for a unit-spaced 4-node stencil {-1, 0, 1, 2}
// evaluated at offset a in [0, 1] from node 0. Exact on cubics.
inline void cubic_weights(double a, double w[4]) {
    w[0] = -a * (a - 1.0) * (a - 2.0) / 6.0;
    w[1] = (a * a - 1.0) * (a - 2.0) / 2.0;
    w[2] = -a * (a + 1.0) * (a - 2.0) / 2.0;
    w[3] = a * (a * a - 1.0) / 6.0;
}

// 4D cubic tensor-product interpolation of f at (x, p). Values outside the
// grid are taken as zero (f is compactly supported).
double interp4_cubic(const Grid4D& f, Vec2 x, Vec2 p);

} // namespace nv2d
