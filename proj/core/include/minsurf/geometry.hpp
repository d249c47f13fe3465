#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "minsurf/errors.hpp"

namespace minsurf {

// Angle helpers (all closed-curve parameters live on [0, 2*pi)).
double wrap_angle(double t);
// Length of the forward (counterclockwise) arc from a to b, in [0, 2*pi).
double forward_gap(double a, double b);
// Midpoint of the forward arc from t0 to t1; plain average for open arcs.
// arc_midpoint(t, t) == t.
double arc_midpoint(double t0, double t1, bool closed);

// A parametric contour curve in R^d, d >= 2.  Closed curves are 2*pi
// periodic; open arcs are defined on [param_begin, param_end] and throw
// OutOfDomain outside it.
class Curve {
public:
    virtual ~Curve() = default;

    int dimension() const { return dim_; }
    bool is_closed() const { return closed_; }
    double param_begin() const { return t_begin_; }
    double param_end() const { return t_end_; }

    // Point, first and second derivative.  `out.size()` must equal
    // dimension().
    void eval(double t, std::span<double> out) const;
    void eval_d1(double t, std::span<double> out) const;
    void eval_d2(double t, std::span<double> out) const;

    // Allocating conveniences.
    std::vector<double> point(double t) const;
    std::vector<double> d1(double t) const;
    std::vector<double> d2(double t) const;

protected:
    Curve(int dim, bool closed, double t_begin, double t_end);

    virtual void eval_point(double t, std::span<double> out) const = 0;
    virtual void eval_deriv1(double t, std::span<double> out) const = 0;
    virtual void eval_deriv2(double t, std::span<double> out) const = 0;

private:
    double clamp_param(double t) const;

    int dim_;
    bool closed_;
    double t_begin_;
    double t_end_;
};

// Closed curve given per coordinate as a truncated Fourier series
//   x_k(t) = sum_m cos_coeffs[k][m]*cos(m*t) + sin_coeffs[k][m]*sin(m*t)
// (index m is the harmonic; entry 0 of the sin list is ignored).
class FourierCurve : public Curve {
public:
    FourierCurve(std::vector<std::vector<double>> cos_coeffs,
                 std::vector<std::vector<double>> sin_coeffs);

protected:
    void eval_point(double t, std::span<double> out) const override;
    void eval_deriv1(double t, std::span<double> out) const override;
    void eval_deriv2(double t, std::span<double> out) const override;

private:
    std::vector<std::vector<double>> cos_;
    std::vector<std::vector<double>> sin_;
};

// Perimeter of [-1,1]^2 traversed counterclockwise at constant speed 4/pi,
// corners at t = pi/4, 3*pi/4, 5*pi/4, 7*pi/4 (t = 0 is the midpoint of the
// right edge).  Derivatives at a corner are the one-sided forward ones; the
// second derivative is zero everywhere.
class SquareCurve : public Curve {
public:
    SquareCurve();

protected:
    void eval_point(double t, std::span<double> out) const override;
    void eval_deriv1(double t, std::span<double> out) const override;
    void eval_deriv2(double t, std::span<double> out) const override;

private:
    // Segment index in [0,4) and offset within it; snaps exactly onto
    // corners so that corner parameters reproduce corner coordinates.
    void locate(double t, int& seg, double& local) const;
};

// Circular arc (cos t, 0, sin t) for t in [0, alpha].
class CircularArc : public Curve {
public:
    explicit CircularArc(double alpha);

protected:
    void eval_point(double t, std::span<double> out) const override;
    void eval_deriv1(double t, std::span<double> out) const override;
    void eval_deriv2(double t, std::span<double> out) const override;
};

// Bounded piece of a plane in R^3: points p with (p - base) . normal == 0
// and |p - base| <= bounding_radius.
struct PlanarSurface {
    PlanarSurface(std::array<double, 3> base_point,
                  std::array<double, 3> normal_dir,
                  double radius);

    std::array<double, 3> base;
    std::array<double, 3> normal; // unit length
    double bounding_radius;
};

// Orthogonal projection onto the plane, then a radial clamp onto the
// bounding disk.  Idempotent.
std::array<double, 3> project_to_plane(const PlanarSurface& s,
                                       const std::array<double, 3>& p);

// A partially free boundary configuration: an open arc Gamma plus the
// bounded plane piece S its endpoints q1 = gamma(t_a), q3 = gamma(t_b) lie
// on (within 1e-10).
class FreeBoundaryContour {
public:
    FreeBoundaryContour(std::unique_ptr<Curve> arc, PlanarSurface surface);

    const Curve& arc() const { return *arc_; }
    const PlanarSurface& surface() const { return surface_; }
    const std::array<double, 3>& q1() const { return q1_; }
    const std::array<double, 3>& q3() const { return q3_; }

private:
    std::unique_ptr<Curve> arc_;
    PlanarSurface surface_;
    std::array<double, 3> q1_;
    std::array<double, 3> q3_;
};

// Non-owning view of a contour as the relaxation sees it: the curve carrying
// the Newton updates plus, for partially free problems, the plane the free
// nodes project onto.
struct ContourRef {
    const Curve* curve = nullptr;
    const PlanarSurface* surface = nullptr;

    bool free_boundary() const { return surface != nullptr; }
};

inline ContourRef make_contour_ref(const Curve& c) { return {&c, nullptr}; }
inline ContourRef make_contour_ref(const FreeBoundaryContour& fb) {
    return {&fb.arc(), &fb.surface()};
}

// Builtin closed contours: "circle", "ellipse" (params a, b), "rose3",
// "curve3d", "square".  Throws UnknownName otherwise.
std::unique_ptr<Curve> make_builtin_curve(const std::string& name,
                                          std::span<const double> params = {});

// Builtin partially free configuration: circular arc of opening alpha in
// the xz-plane together with the plane through its chord (z = 0 for
// alpha = pi), sized to contain the chord.
FreeBoundaryContour make_arc_on_plane(double alpha);

} // namespace minsurf
