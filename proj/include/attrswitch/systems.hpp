#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <variant>

#include "attrswitch/errors.hpp"
#include "attrswitch/vec2.hpp"

namespace attrswitch {

enum class SystemKind { SoftImpact, Duffing };

/// Which scalar the control input u acts on.
///
/// The first three apply to the soft-impact oscillator: an additive force on
/// the acceleration, an offset on the forcing amplitude, or an offset on the
/// mass-spring gap. The last one applies to the Duffing oscillator, offsetting
/// the cubic stiffness coefficient.
enum class ControlChannel { AdditiveForce, ForcingAmplitude, Gap, CubicStiffness };

/// Nondimensional parameters of the soft-impact oscillator.
struct ImpactParams {
    double zeta;   ///< damping ratio
    double e;      ///< gap between mass and secondary spring, > 0
    double a;      ///< forcing amplitude
    double beta;   ///< stiffness ratio of the secondary spring, >= 0
    double omega;  ///< forcing frequency, > 0
};

/// Parameters of the forced Duffing oscillator.
struct DuffingParams {
    double Gamma;  ///< forcing amplitude
    double omega;  ///< forcing frequency, > 0
    double p1;     ///< damping coefficient
    double p2;     ///< cubic stiffness coefficient
};

/// Dimensional parameters of the physical impact oscillator.
struct PhysicalParams {
    double m;      ///< mass, > 0
    double k1;     ///< primary stiffness, > 0
    double k2;     ///< secondary stiffness, >= 0
    double c;      ///< viscous damping
    double g;      ///< gap
    double A;      ///< forcing amplitude
    double Omega;  ///< forcing frequency
    double y0;     ///< reference length, > 0
};

/// Scale physical parameters to the nondimensional impact-oscillator form.
[[nodiscard]] inline ImpactParams nondimensionalize(const PhysicalParams& p) {
    if (!(p.m > 0.0)) throw DomainError("nondimensionalize: mass must be positive");
    if (!(p.k1 > 0.0)) throw DomainError("nondimensionalize: primary stiffness must be positive");
    if (!(p.y0 > 0.0)) throw DomainError("nondimensionalize: reference length must be positive");
    if (p.k2 < 0.0) throw DomainError("nondimensionalize: secondary stiffness must be nonnegative");
    const double omega_n = std::sqrt(p.k1 / p.m);
    return ImpactParams{p.c / (2.0 * p.m * omega_n), p.g / p.y0, p.A / p.y0, p.k2 / p.k1,
                        p.Omega / omega_n};
}

/// Parameters that the continuation module can sweep.
enum class SweepParam { ForcingAmp, Gap, Damping, Stiffness };

/// Points within this distance of the impact surface x = e_eff use the
/// below-surface Heaviside branch when evaluating derivatives.
inline constexpr double kOnSurfaceTol = 1e-12;

/// One of the two built-in forced oscillators together with its designated
/// control channel. Immutable; parameter changes go through with_param().
class SystemDef {
public:
    [[nodiscard]] static SystemDef soft_impact(const ImpactParams& p,
                                               ControlChannel channel) {
        if (!(p.e > 0.0)) throw ConfigError("soft-impact: gap e must be positive");
        if (!(p.beta >= 0.0)) throw ConfigError("soft-impact: beta must be nonnegative");
        if (!(p.omega > 0.0)) throw ConfigError("soft-impact: omega must be positive");
        if (channel == ControlChannel::CubicStiffness)
            throw ConfigError("soft-impact: cubic-stiffness channel requires the Duffing system");
        return SystemDef(p, channel);
    }

    [[nodiscard]] static SystemDef duffing(const DuffingParams& p, ControlChannel channel) {
        if (!(p.omega > 0.0)) throw ConfigError("duffing: omega must be positive");
        if (channel != ControlChannel::CubicStiffness)
            throw ConfigError("duffing: only the cubic-stiffness channel is available");
        return SystemDef(p, channel);
    }

    [[nodiscard]] SystemKind kind() const {
        return std::holds_alternative<ImpactParams>(params_) ? SystemKind::SoftImpact
                                                             : SystemKind::Duffing;
    }
    [[nodiscard]] ControlChannel channel() const { return channel_; }
    [[nodiscard]] const ImpactParams& impact() const { return std::get<ImpactParams>(params_); }
    [[nodiscard]] const DuffingParams& duffing_params() const {
        return std::get<DuffingParams>(params_);
    }
    [[nodiscard]] double omega() const { return omega_; }
    /// Forcing period T = 2*pi/omega.
    [[nodiscard]] double period() const { return period_; }

    [[nodiscard]] double param(SweepParam which) const {
        switch (which) {
            case SweepParam::ForcingAmp: return impact().a;
            case SweepParam::Gap: return impact().e;
            case SweepParam::Damping: return duffing_params().p1;
            case SweepParam::Stiffness: return duffing_params().p2;
        }
        throw ConfigError("unknown sweep parameter");
    }

    /// Copy of this system with one parameter replaced.
    [[nodiscard]] SystemDef with_param(SweepParam which, double value) const {
        SystemDef out = *this;
        switch (which) {
            case SweepParam::ForcingAmp: std::get<ImpactParams>(out.params_).a = value; break;
            case SweepParam::Gap: std::get<ImpactParams>(out.params_).e = value; break;
            case SweepParam::Damping: std::get<DuffingParams>(out.params_).p1 = value; break;
            case SweepParam::Stiffness: std::get<DuffingParams>(out.params_).p2 = value; break;
        }
        return out;
    }

    /// Effective gap e + u for the gap channel, plain e otherwise.
    /// Only meaningful for the soft-impact system.
    [[nodiscard]] double effective_gap(double u) const {
        const ImpactParams& p = impact();
        return channel_ == ControlChannel::Gap ? p.e + u : p.e;
    }

private:
    template <class P>
    SystemDef(const P& p, ControlChannel channel)
        : params_(p), channel_(channel), omega_(p.omega),
          period_(2.0 * std::numbers::pi / p.omega) {}

    std::variant<ImpactParams, DuffingParams> params_;
    ControlChannel channel_;
    double omega_;
    double period_;
};

/// Right-hand side of the controlled system: returns (dx/dtau, dv/dtau).
///
/// Soft impact:  v' = amp*w^2*sin(w*tau) + add - x - 2*zeta*v - beta*(x - e_eff)*H(x - e_eff)
/// with (amp, add, e_eff) depending on the control channel. The secondary
/// spring force vanishes at the surface, so the field is continuous there.
///
/// Duffing:      v' = Gamma*sin(w*tau) + x - p1*v - (p2 + u)*x^3
[[nodiscard]] inline Vec2 eval_rhs(const SystemDef& sys, double tau, Vec2 y, double u) {
    if (sys.kind() == SystemKind::SoftImpact) {
        const ImpactParams& p = sys.impact();
        const ControlChannel ch = sys.channel();
        // Single arithmetic path for all channels so that u = 0 reproduces the
        // uncontrolled field bitwise regardless of channel.
        const double amp = (ch == ControlChannel::ForcingAmplitude) ? p.a + u : p.a;
        const double add = (ch == ControlChannel::AdditiveForce) ? u : 0.0;
        const double gap = (ch == ControlChannel::Gap) ? p.e + u : p.e;
        const double s = y.x - gap;
        const double spring = (s > 0.0) ? p.beta * s : 0.0;
        const double acc = amp * p.omega * p.omega * std::sin(p.omega * tau) + add - y.x -
                           2.0 * p.zeta * y.v - spring;
        return {y.v, acc};
    }
    const DuffingParams& p = sys.duffing_params();
    const double k3 = p.p2 + u;
    const double acc =
        p.Gamma * std::sin(p.omega * tau) + y.x - p.p1 * y.v - k3 * y.x * y.x * y.x;
    return {y.v, acc};
}

/// Analytic partial derivatives of eval_rhs, treating the Heaviside factor as
/// locally constant. Within kOnSurfaceTol of the impact surface the
/// below-surface branch (H = 0) is used and on_surface is set; callers that
/// need a one-sided value on the other branch must displace the query point.
struct RhsPartials {
    Vec2 df_du;
    Mat2 df_dy;
    Vec2 df_dtau;
    bool on_surface = false;
};

[[nodiscard]] inline RhsPartials rhs_partials(const SystemDef& sys, double tau, Vec2 y,
                                              double u) {
    RhsPartials out;
    if (sys.kind() == SystemKind::SoftImpact) {
        const ImpactParams& p = sys.impact();
        const ControlChannel ch = sys.channel();
        const double amp = (ch == ControlChannel::ForcingAmplitude) ? p.a + u : p.a;
        const double gap = (ch == ControlChannel::Gap) ? p.e + u : p.e;
        const double s = y.x - gap;
        out.on_surface = std::fabs(s) < kOnSurfaceTol;
        const double H = (s > 0.0 && !out.on_surface) ? 1.0 : 0.0;
        out.df_dy = Mat2{0.0, 1.0, -1.0 - p.beta * H, -2.0 * p.zeta};
        out.df_dtau = {0.0, amp * p.omega * p.omega * p.omega * std::cos(p.omega * tau)};
        switch (ch) {
            case ControlChannel::AdditiveForce: out.df_du = {0.0, 1.0}; break;
            case ControlChannel::ForcingAmplitude:
                out.df_du = {0.0, p.omega * p.omega * std::sin(p.omega * tau)};
                break;
            case ControlChannel::Gap:
                // acceleration term is -beta*(x - e - u)*H, so d/du = +beta*H
                out.df_du = {0.0, p.beta * H};
                break;
            case ControlChannel::CubicStiffness: break;  // unreachable by construction
        }
        return out;
    }
    const DuffingParams& p = sys.duffing_params();
    const double k3 = p.p2 + u;
    out.df_dy = Mat2{0.0, 1.0, 1.0 - 3.0 * k3 * y.x * y.x, -p.p1};
    out.df_dtau = {0.0, p.Gamma * p.omega * std::cos(p.omega * tau)};
    out.df_du = {0.0, -y.x * y.x * y.x};
    return out;
}

[[nodiscard]] inline std::string to_string(ControlChannel ch) {
    switch (ch) {
        case ControlChannel::AdditiveForce: return "additive-force";
        case ControlChannel::ForcingAmplitude: return "forcing-amplitude";
        case ControlChannel::Gap: return "gap";
        case ControlChannel::CubicStiffness: return "cubic-stiffness";
    }
    return "?";
}

[[nodiscard]] inline std::string to_string(SystemKind k) {
    return k == SystemKind::SoftImpact ? "soft-impact" : "duffing";
}

[[nodiscard]] inline std::string to_string(SweepParam p) {
    switch (p) {
        case SweepParam::ForcingAmp: return "a";
        case SweepParam::Gap: return "e";
        case SweepParam::Damping: return "p1";
        case SweepParam::Stiffness: return "p2";
    }
    return "?";
}

}  // namespace attrswitch
