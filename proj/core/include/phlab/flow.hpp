#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace phlab {

using Rng = std::mt19937_64;

/// Uniform deviate in [0,1) with 53 random bits; avoids the
/// implementation-defined std::uniform_real_distribution so that seeded
/// draws are identical on every platform.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1p-53;
}

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double c) const { return {c * x, c * y}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const;
};

/// Point of the suspension manifold: torus coordinates in [0,1)^2 plus a
/// roof coordinate in [0,1). The constructor reduces into the fundamental
/// domain; the roof reduction applies the base automorphism once per unit.
struct PhasePoint {
    Vec2 base;
    double roof = 0.0;
};

/// Tangent vector in the invariant frame (stable eigendirection, unstable
/// eigendirection, flow direction). The frame is global for the cat
/// suspension because the automorphism is linear.
struct TangentVector {
    double xi_s = 0.0, xi_u = 0.0, xi_c = 0.0;

    double norm() const;
    TangentVector operator+(const TangentVector& o) const {
        return {xi_s + o.xi_s, xi_u + o.xi_u, xi_c + o.xi_c};
    }
    TangentVector operator*(double c) const { return {c * xi_s, c * xi_u, c * xi_c}; }
};

/// Angle between two tangent vectors, in radians.
double angle_between(const TangentVector& a, const TangentVector& b);

struct FlowResult {
    PhasePoint point;
    long crossings;  // signed number of roof crossings along the way
};

struct DistResult {
    double value;
    bool local;  // false when the points are farther apart than 0.25
};

/// Maximal time interval on which an orbit stays in one chart: the base is
/// frozen at A^k b and the roof moves at unit speed. Panel k covers global
/// times [k - roof0, k + 1 - roof0).
struct OrbitPanel {
    long index;       // crossing count during the panel
    double t_begin;   // clipped panel start (global orbit time)
    double t_end;     // clipped panel end
    Vec2 base;        // base coordinates, constant on the panel
    double roof_at(double t) const { return roof0 + t - static_cast<double>(index); }
    double roof0;     // roof of the anchor point at t = 0
};

class CatSuspension;

/// Walks the roof-crossing panels of an orbit in either direction without
/// recomputing the base from scratch; the workhorse behind every orbit
/// integral in the laboratory.
class PanelWalker {
  public:
    PanelWalker(const CatSuspension& model, const PhasePoint& p);

    long index() const { return k_; }
    const Vec2& base() const { return base_; }
    double t_begin() const;
    double t_end() const;
    OrbitPanel panel() const;
    void step_forward();
    void step_backward();
    /// Moves to the panel containing global time t.
    void seek(double t);

  private:
    const CatSuspension* model_;
    Vec2 base_;
    double roof0_;
    long k_ = 0;
};

/// Interface every suspension-type model exposes to the rest of the
/// laboratory. Only the linear cat-map suspension is implemented; other
/// models plug in here later.
class FlowModel {
  public:
    virtual ~FlowModel() = default;
    virtual PhasePoint flow(const PhasePoint& p, double t) const = 0;
    virtual TangentVector dflow(const PhasePoint& p, const TangentVector& v, double t) const = 0;
    virtual PhasePoint leg_s(const PhasePoint& p, double u) const = 0;
    virtual PhasePoint leg_u(const PhasePoint& p, double u) const = 0;
    virtual double dist(const PhasePoint& p, const PhasePoint& q) const = 0;
    virtual PhasePoint sample(Rng& rng) const = 0;
    virtual std::string_view name() const = 0;
};

/// Suspension of the hyperbolic toral automorphism A = [[2,1],[1,1]] with
/// unit roof: (base, roof+1) ~ (A base, roof). The flow advances the roof
/// at unit speed and applies A at each integer crossing. Stable/unstable
/// eigendirections are orthonormal (A is symmetric); su-legs translate the
/// base along them and never move the roof, so leg parameters transform
/// exactly by powers of the eigenvalue under the flow.
class CatSuspension final : public FlowModel {
  public:
    CatSuspension();

    PhasePoint flow(const PhasePoint& p, double t) const override;
    FlowResult flow_counted(const PhasePoint& p, double t) const;
    TangentVector dflow(const PhasePoint& p, const TangentVector& v, double t) const override;
    PhasePoint leg_s(const PhasePoint& p, double u) const override;
    PhasePoint leg_u(const PhasePoint& p, double u) const override;
    double dist(const PhasePoint& p, const PhasePoint& q) const override;
    DistResult dist_checked(const PhasePoint& p, const PhasePoint& q) const;
    PhasePoint sample(Rng& rng) const override;
    std::string_view name() const override { return "cat_suspension"; }

    /// Signed crossing count of the orbit of p over [0,t] (or [t,0]).
    long crossings(const PhasePoint& p, double t) const;

    double lambda() const { return lambda_; }
    double log_lambda() const { return log_lambda_; }
    /// lambda^n for signed integer n, by repeated multiplication.
    double lambda_pow(long n) const;
    Vec2 e_s() const { return e_s_; }
    Vec2 e_u() const { return e_u_; }

    /// One application of A (n=+1) or A^{-1} (n=-1) on the torus.
    Vec2 apply_auto(Vec2 b, int dir) const;

    /// Uniform partial-hyperbolicity constants of the unchanged flow in the
    /// rate normalization nu = e^{-B t}, nu_hat = e^{-A t}, gamma = e^{-a t}.
    double const_B() const { return log_lambda_; }
    double const_A() const { return log_lambda_; }
    double const_a() const { return 0.0; }
    double const_b() const { return 0.0; }

  private:
    double lambda_, log_lambda_;
    Vec2 e_s_, e_u_;
};

/// Canonicalizes base and roof into [0,1) (roof reduction applies A).
PhasePoint make_point(const CatSuspension& m, Vec2 base, double roof);

}  // namespace phlab
