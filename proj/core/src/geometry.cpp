#include "minsurf/geometry.hpp"

#include <cmath>
#include <cstdlib>

namespace minsurf {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kDomainSlack = 1e-12;
} // namespace

double wrap_angle(double t) {
    double w = t - kTwoPi * std::floor(t / kTwoPi);
    if (w >= kTwoPi) w = 0.0; // guard against rounding at the seam
    return w;
}

double forward_gap(double a, double b) { return wrap_angle(b - a); }

double arc_midpoint(double t0, double t1, bool closed) {
    if (!closed) return 0.5 * (t0 + t1);
    return wrap_angle(t0 + 0.5 * forward_gap(t0, t1));
}

// ---- Curve -----------------------------------------------------------

Curve::Curve(int dim, bool closed, double t_begin, double t_end)
    : dim_(dim), closed_(closed), t_begin_(t_begin), t_end_(t_end) {}

double Curve::clamp_param(double t) const {
    if (closed_) return wrap_angle(t);
    if (t < t_begin_ - kDomainSlack || t > t_end_ + kDomainSlack)
        throw OutOfDomain("curve parameter " + std::to_string(t) +
                          " outside arc domain [" + std::to_string(t_begin_) +
                          ", " + std::to_string(t_end_) + "]");
    if (t < t_begin_) return t_begin_;
    if (t > t_end_) return t_end_;
    return t;
}

void Curve::eval(double t, std::span<double> out) const {
    if (static_cast<int>(out.size()) != dim_)
        throw DimensionMismatch("curve eval output size mismatch");
    eval_point(clamp_param(t), out);
}

void Curve::eval_d1(double t, std::span<double> out) const {
    if (static_cast<int>(out.size()) != dim_)
        throw DimensionMismatch("curve eval output size mismatch");
    eval_deriv1(clamp_param(t), out);
}

void Curve::eval_d2(double t, std::span<double> out) const {
    if (static_cast<int>(out.size()) != dim_)
        throw DimensionMismatch("curve eval output size mismatch");
    eval_deriv2(clamp_param(t), out);
}

std::vector<double> Curve::point(double t) const {
    std::vector<double> p(dim_);
    eval(t, p);
    return p;
}

std::vector<double> Curve::d1(double t) const {
    std::vector<double> p(dim_);
    eval_d1(t, p);
    return p;
}

std::vector<double> Curve::d2(double t) const {
    std::vector<double> p(dim_);
    eval_d2(t, p);
    return p;
}

// ---- FourierCurve ----------------------------------------------------

FourierCurve::FourierCurve(std::vector<std::vector<double>> cos_coeffs,
                           std::vector<std::vector<double>> sin_coeffs)
    : Curve(static_cast<int>(cos_coeffs.size()), true, 0.0, kTwoPi),
      cos_(std::move(cos_coeffs)),
      sin_(std::move(sin_coeffs)) {
    if (cos_.size() < 2)
        throw ValidationError("fourier curve needs dimension >= 2");
    if (sin_.size() != cos_.size())
        throw ValidationError("fourier curve: cos/sin coordinate counts differ");
}

void FourierCurve::eval_point(double t, std::span<double> out) const {
    for (size_t k = 0; k < cos_.size(); ++k) {
        double acc = 0.0;
        const auto& c = cos_[k];
        const auto& s = sin_[k];
        size_t n = std::max(c.size(), s.size());
        for (size_t m = 0; m < n; ++m) {
            double cm = m < c.size() ? c[m] : 0.0;
            double sm = m < s.size() ? s[m] : 0.0;
            if (m == 0) {
                acc += cm;
            } else if (cm != 0.0 || sm != 0.0) {
                acc += cm * std::cos(m * t) + sm * std::sin(m * t);
            }
        }
        out[k] = acc;
    }
}

void FourierCurve::eval_deriv1(double t, std::span<double> out) const {
    for (size_t k = 0; k < cos_.size(); ++k) {
        double acc = 0.0;
        const auto& c = cos_[k];
        const auto& s = sin_[k];
        size_t n = std::max(c.size(), s.size());
        for (size_t m = 1; m < n; ++m) {
            double cm = m < c.size() ? c[m] : 0.0;
            double sm = m < s.size() ? s[m] : 0.0;
            if (cm != 0.0 || sm != 0.0)
                acc += m * (-cm * std::sin(m * t) + sm * std::cos(m * t));
        }
        out[k] = acc;
    }
}

void FourierCurve::eval_deriv2(double t, std::span<double> out) const {
    for (size_t k = 0; k < cos_.size(); ++k) {
        double acc = 0.0;
        const auto& c = cos_[k];
        const auto& s = sin_[k];
        size_t n = std::max(c.size(), s.size());
        for (size_t m = 1; m < n; ++m) {
            double cm = m < c.size() ? c[m] : 0.0;
            double sm = m < s.size() ? s[m] : 0.0;
            if (cm != 0.0 || sm != 0.0)
                acc -= double(m) * m *
                       (cm * std::cos(m * t) + sm * std::sin(m * t));
        }
        out[k] = acc;
    }
}

// ---- SquareCurve -----------------------------------------------------

namespace {
constexpr double kQuarterPi = 0.78539816339744830961566084581988;
constexpr double kHalfPi = 1.5707963267948966192313216916398;
// Counterclockwise corner list starting after t = pi/4.
constexpr double kCorners[4][2] = {
    {1.0, 1.0}, {-1.0, 1.0}, {-1.0, -1.0}, {1.0, -1.0}};
constexpr double kSquareSpeed = 4.0 / 3.1415926535897932384626433832795;
} // namespace

SquareCurve::SquareCurve() : Curve(2, true, 0.0, kTwoPi) {}

void SquareCurve::locate(double t, int& seg, double& local) const {
    // Work in a frame where segment boundaries (the corners) are at
    // multiples of pi/2.
    double u = wrap_angle(t - kQuarterPi);
    double q = u / kHalfPi;
    double r = std::round(q);
    if (std::abs(q - r) <= 1e-9) {
        // Exactly (up to rounding) at a corner: snap so corner parameters
        // reproduce corner coordinates bit for bit.
        seg = static_cast<int>(r) % 4;
        local = 0.0;
    } else {
        seg = static_cast<int>(std::floor(q)) % 4;
        local = q - std::floor(q);
    }
}

void SquareCurve::eval_point(double t, std::span<double> out) const {
    int seg;
    double local;
    locate(t, seg, local);
    const double* a = kCorners[seg];
    const double* b = kCorners[(seg + 1) % 4];
    // local in [0,1) along the edge; 2.0 is the edge length.
    out[0] = a[0] + local * (b[0] - a[0]);
    out[1] = a[1] + local * (b[1] - a[1]);
}

void SquareCurve::eval_deriv1(double t, std::span<double> out) const {
    int seg;
    double local;
    locate(t, seg, local);
    const double* a = kCorners[seg];
    const double* b = kCorners[(seg + 1) % 4];
    out[0] = 0.5 * (b[0] - a[0]) * kSquareSpeed;
    out[1] = 0.5 * (b[1] - a[1]) * kSquareSpeed;
}

void SquareCurve::eval_deriv2(double, std::span<double> out) const {
    out[0] = 0.0;
    out[1] = 0.0;
}

// ---- CircularArc -----------------------------------------------------

CircularArc::CircularArc(double alpha) : Curve(3, false, 0.0, alpha) {
    if (!(alpha > 0.0) || !(alpha < kTwoPi))
        throw ValidationError("arc opening angle must lie in (0, 2*pi)");
}

void CircularArc::eval_point(double t, std::span<double> out) const {
    out[0] = std::cos(t);
    out[1] = 0.0;
    out[2] = std::sin(t);
}

void CircularArc::eval_deriv1(double t, std::span<double> out) const {
    out[0] = -std::sin(t);
    out[1] = 0.0;
    out[2] = std::cos(t);
}

void CircularArc::eval_deriv2(double t, std::span<double> out) const {
    out[0] = -std::cos(t);
    out[1] = 0.0;
    out[2] = -std::sin(t);
}

// ---- PlanarSurface ---------------------------------------------------

namespace {
double norm3(const std::array<double, 3>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}
} // namespace

PlanarSurface::PlanarSurface(std::array<double, 3> base_point,
                             std::array<double, 3> normal_dir,
                             double radius)
    : base(base_point), normal(normal_dir), bounding_radius(radius) {
    double n = norm3(normal);
    if (!(n > 0.0))
        throw ValidationError("plane normal must be nonzero");
    if (!(bounding_radius > 0.0))
        throw ValidationError("plane bounding radius must be positive");
    for (double& c : normal) c /= n;
}

std::array<double, 3> project_to_plane(const PlanarSurface& s,
                                       const std::array<double, 3>& p) {
    double dist = (p[0] - s.base[0]) * s.normal[0] +
                  (p[1] - s.base[1]) * s.normal[1] +
                  (p[2] - s.base[2]) * s.normal[2];
    std::array<double, 3> q = {p[0] - dist * s.normal[0],
                               p[1] - dist * s.normal[1],
                               p[2] - dist * s.normal[2]};
    std::array<double, 3> v = {q[0] - s.base[0], q[1] - s.base[1],
                               q[2] - s.base[2]};
    double r = norm3(v);
    if (r > s.bounding_radius) {
        double scale = s.bounding_radius / r;
        for (int k = 0; k < 3; ++k) q[k] = s.base[k] + v[k] * scale;
    }
    return q;
}

// ---- FreeBoundaryContour ---------------------------------------------

FreeBoundaryContour::FreeBoundaryContour(std::unique_ptr<Curve> arc,
                                         PlanarSurface surface)
    : arc_(std::move(arc)), surface_(surface) {
    if (!arc_) throw ValidationError("free boundary contour needs an arc");
    if (arc_->dimension() != 3)
        throw ValidationError("free boundary contour must live in R^3");
    if (arc_->is_closed())
        throw ValidationError("free boundary contour needs an open arc");
    auto p1 = arc_->point(arc_->param_begin());
    auto p3 = arc_->point(arc_->param_end());
    q1_ = {p1[0], p1[1], p1[2]};
    q3_ = {p3[0], p3[1], p3[2]};
    for (const auto& q : {q1_, q3_}) {
        double dist = (q[0] - surface_.base[0]) * surface_.normal[0] +
                      (q[1] - surface_.base[1]) * surface_.normal[1] +
                      (q[2] - surface_.base[2]) * surface_.normal[2];
        if (std::abs(dist) > 1e-10)
            throw ValidationError("arc endpoints must lie on the plane");
    }
}

// ---- builtins --------------------------------------------------------

std::unique_ptr<Curve> make_builtin_curve(const std::string& name,
                                          std::span<const double> params) {
    if (name == "circle") {
        return std::make_unique<FourierCurve>(
            std::vector<std::vector<double>>{{0.0, 1.0}, {0.0, 0.0}},
            std::vector<std::vector<double>>{{0.0, 0.0}, {0.0, 1.0}});
    }
    if (name == "ellipse") {
        double a = params.size() > 0 ? params[0] : 2.0;
        double b = params.size() > 1 ? params[1] : 1.0;
        if (!(a > 0.0) || !(b > 0.0))
            throw ValidationError("ellipse semi-axes must be positive");
        return std::make_unique<FourierCurve>(
            std::vector<std::vector<double>>{{0.0, a}, {0.0, 0.0}},
            std::vector<std::vector<double>>{{0.0, 0.0}, {0.0, b}});
    }
    if (name == "rose3") {
        // (1 + cos(3t)/2) (cos t, sin t) expanded into harmonics.
        return std::make_unique<FourierCurve>(
            std::vector<std::vector<double>>{{0.0, 1.0, 0.25, 0.0, 0.25},
                                             {0.0, 0.0, 0.0, 0.0, 0.0}},
            std::vector<std::vector<double>>{{0.0, 0.0, 0.0, 0.0, 0.0},
                                             {0.0, 1.0, -0.25, 0.0, 0.25}});
    }
    if (name == "curve3d") {
        // (cos t (1 + sin(2t)/2), sin t (1 + sin(2t)/2), sin(3t)/2).
        return std::make_unique<FourierCurve>(
            std::vector<std::vector<double>>{{0.0, 1.0, 0.0, 0.0},
                                             {0.0, 0.25, 0.0, -0.25},
                                             {0.0, 0.0, 0.0, 0.0}},
            std::vector<std::vector<double>>{{0.0, 0.25, 0.0, 0.25},
                                             {0.0, 1.0, 0.0, 0.0},
                                             {0.0, 0.0, 0.0, 0.5}});
    }
    if (name == "square") return std::make_unique<SquareCurve>();
    throw UnknownName("unknown builtin contour '" + name + "'");
}

FreeBoundaryContour make_arc_on_plane(double alpha) {
    auto arc = std::make_unique<CircularArc>(alpha);
    auto q1 = arc->point(0.0);
    auto q3 = arc->point(alpha);
    std::array<double, 3> chord = {q3[0] - q1[0], q3[1] - q1[1],
                                   q3[2] - q1[2]};
    std::array<double, 3> base = {0.5 * (q1[0] + q3[0]), 0.5 * (q1[1] + q3[1]),
                                  0.5 * (q1[2] + q3[2])};
    // Plane through the chord, spanned by the chord and the y axis:
    // normal = chord x e_y.
    std::array<double, 3> normal = {-chord[2], 0.0, chord[0]};
    // Snap components that vanish up to rounding so the symmetric case
    // (alpha = pi, plane z = 0) is represented exactly.
    for (std::array<double, 3>* v : {&base, &normal})
        for (int k = 0; k < 3; ++k)
            if (std::abs((*v)[k]) < 1e-12) (*v)[k] = 0.0;
    double chord_len = norm3(chord);
    PlanarSurface plane(base, normal, chord_len);
    return FreeBoundaryContour(std::move(arc), plane);
}

} // namespace minsurf
