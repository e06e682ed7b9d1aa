#include "phlab/flow.hpp"

#include <cmath>
#include <stdexcept>

namespace phlab {

namespace {

double mod1(double x) {
    double r = x - std::floor(x);
    return r < 1.0 ? r : 0.0;  // floor rounding can leave exactly 1.0
}

Vec2 mod1(Vec2 b) { return {mod1(b.x), mod1(b.y)}; }

}  // namespace

double Vec2::norm() const { return std::hypot(x, y); }

double TangentVector::norm() const {
    return std::sqrt(xi_s * xi_s + xi_u * xi_u + xi_c * xi_c);
}

double angle_between(const TangentVector& a, const TangentVector& b) {
    const double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0) throw std::invalid_argument("angle_between: zero vector");
    // cross product magnitude in the orthonormal frame; asin is accurate for
    // the small angles this laboratory cares about
    const double cx = a.xi_u * b.xi_c - a.xi_c * b.xi_u;
    const double cy = a.xi_c * b.xi_s - a.xi_s * b.xi_c;
    const double cz = a.xi_s * b.xi_u - a.xi_u * b.xi_s;
    const double cross = std::sqrt(cx * cx + cy * cy + cz * cz) / (na * nb);
    const double dot = (a.xi_s * b.xi_s + a.xi_u * b.xi_u + a.xi_c * b.xi_c) / (na * nb);
    return std::atan2(cross, dot);
}

CatSuspension::CatSuspension() {
    const double s5 = std::sqrt(5.0);
    lambda_ = (3.0 + s5) / 2.0;
    log_lambda_ = std::log(lambda_);
    // A = [[2,1],[1,1]] is symmetric; eigenvectors are orthogonal.
    // A e_u = lambda e_u with e_u ~ (1, (sqrt5-1)/2),
    // A e_s = lambda^{-1} e_s with e_s ~ (1, -(1+sqrt5)/2).
    const Vec2 raw_u{1.0, (s5 - 1.0) / 2.0};
    const Vec2 raw_s{1.0, -(1.0 + s5) / 2.0};
    e_u_ = raw_u * (1.0 / raw_u.norm());
    e_s_ = raw_s * (1.0 / raw_s.norm());
    // orientation convention: positive first component for both legs
}

Vec2 CatSuspension::apply_auto(Vec2 b, int dir) const {
    if (dir > 0) return mod1(Vec2{2.0 * b.x + b.y, b.x + b.y});
    return mod1(Vec2{b.x - b.y, -b.x + 2.0 * b.y});
}

double CatSuspension::lambda_pow(long n) const {
    double f = 1.0;
    const double m = n > 0 ? lambda_ : 1.0 / lambda_;
    for (long i = 0, c = std::labs(n); i < c; ++i) f *= m;
    return f;
}

long CatSuspension::crossings(const PhasePoint& p, double t) const {
    return static_cast<long>(std::floor(p.roof + t));
}

FlowResult CatSuspension::flow_counted(const PhasePoint& p, double t) const {
    const long n = crossings(p, t);
    Vec2 b = p.base;
    for (long i = 0, c = std::labs(n); i < c; ++i) b = apply_auto(b, n > 0 ? +1 : -1);
    double roof = p.roof + t - static_cast<double>(n);
    if (roof >= 1.0) roof = std::nextafter(1.0, 0.0);  // guard against roundoff at the seam
    if (roof < 0.0) roof = 0.0;
    return {PhasePoint{b, roof}, n};
}

PhasePoint CatSuspension::flow(const PhasePoint& p, double t) const {
    return flow_counted(p, t).point;
}

TangentVector CatSuspension::dflow(const PhasePoint& p, const TangentVector& v, double t) const {
    const long n = crossings(p, t);
    const double f = lambda_pow(n);
    return {v.xi_s / f, v.xi_u * f, v.xi_c};
}

PhasePoint CatSuspension::leg_s(const PhasePoint& p, double u) const {
    return {mod1(p.base + e_s_ * u), p.roof};
}

PhasePoint CatSuspension::leg_u(const PhasePoint& p, double u) const {
    return {mod1(p.base + e_u_ * u), p.roof};
}

DistResult CatSuspension::dist_checked(const PhasePoint& p, const PhasePoint& q) const {
    // Deck search: roof shifts j in {-1,0,1} use the representative
    // (A^j q.base, q.roof - j); base differences reduce to [-1/2, 1/2)
    // componentwise, which minimizes the torus distance exactly.
    double best = std::numeric_limits<double>::infinity();
    for (int j = -1; j <= 1; ++j) {
        Vec2 qb = q.base;
        if (j != 0) qb = apply_auto(qb, j);
        const double dr = (q.roof - j) - p.roof;
        double dx = qb.x - p.base.x;
        double dy = qb.y - p.base.y;
        dx -= std::round(dx);
        dy -= std::round(dy);
        best = std::min(best, std::sqrt(dx * dx + dy * dy + dr * dr));
    }
    return {best, best <= 0.25};
}

double CatSuspension::dist(const PhasePoint& p, const PhasePoint& q) const {
    return dist_checked(p, q).value;
}

PhasePoint CatSuspension::sample(Rng& rng) const {
    const double x = uniform01(rng);
    const double y = uniform01(rng);
    const double s = uniform01(rng);
    return {{x, y}, s};
}

PhasePoint make_point(const CatSuspension& m, Vec2 base, double roof) {
    base = mod1(base);
    while (roof >= 1.0) {
        base = m.apply_auto(base, +1);
        roof -= 1.0;
    }
    while (roof < 0.0) {
        base = m.apply_auto(base, -1);
        roof += 1.0;
    }
    return {base, roof};
}

PanelWalker::PanelWalker(const CatSuspension& model, const PhasePoint& p)
    : model_(&model), base_(p.base), roof0_(p.roof) {}

double PanelWalker::t_begin() const { return static_cast<double>(k_) - roof0_; }
double PanelWalker::t_end() const { return static_cast<double>(k_ + 1) - roof0_; }

OrbitPanel PanelWalker::panel() const {
    return {k_, t_begin(), t_end(), base_, roof0_};
}

void PanelWalker::step_forward() {
    base_ = model_->apply_auto(base_, +1);
    ++k_;
}

void PanelWalker::step_backward() {
    base_ = model_->apply_auto(base_, -1);
    --k_;
}

void PanelWalker::seek(double t) {
    const long target = static_cast<long>(std::floor(roof0_ + t));
    while (k_ < target) step_forward();
    while (k_ > target) step_backward();
}

}  // namespace phlab
