#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ldt/errors.hpp"
#include "ldt/random.hpp"

namespace ldt::rotor {

/// Parameters of the physical twin: a DC motor spinning an unbalanced rotor
/// mounted on an anisotropic non-rigid foundation.
struct RotorParams {
    double M  = 1.0;     ///< foundation + motor mass [kg]
    double m  = 0.15;    ///< unbalance mass [kg]
    double e  = 0.0;     ///< eccentricity of the unbalance mass [m]
    double J  = 5e-3;    ///< rotor moment of inertia [kg m^2]
    double Kx = 900.0;   ///< foundation stiffness, horizontal [N/m]
    double Ky = 1600.0;  ///< foundation stiffness, vertical [N/m]
    double Rx = 1.0;     ///< foundation damping, horizontal [N s/m]
    double Ry = 1.0;     ///< foundation damping, vertical [N s/m]
    double kt = 0.25;    ///< motor torque constant [N m/A]
    double ke = 0.25;    ///< back-EMF constant [V s/rad]
    double Ra = 1.5;     ///< armature resistance [ohm]
    double b  = 1e-3;    ///< viscous rotor friction [N m s/rad]

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw ConfigError(std::string("rotor parameter ") + name + " must be strictly positive");
        };
        positive(M, "M");
        positive(m, "m");
        positive(J, "J");
        positive(Kx, "Kx");
        positive(Ky, "Ky");
        positive(Rx, "Rx");
        positive(Ry, "Ry");
        positive(kt, "kt");
        positive(ke, "ke");
        positive(Ra, "Ra");
        positive(b, "b");
        if (!(e >= 0.0) || !std::isfinite(e))
            throw ConfigError("rotor parameter e must be >= 0");
        if (Kx == Ky)
            throw ConfigError("rotor foundation must be anisotropic (Kx != Ky)");
        if (!(m < M))
            throw ConfigError("unbalance mass m must be smaller than foundation mass M");
    }
};

/// State of the twin: foundation displacement/velocity plus rotor angle and
/// angular velocity.
struct RotorState {
    double x   = 0.0; ///< foundation displacement, horizontal [m]
    double y_f = 0.0; ///< foundation displacement, vertical [m]
    double vx  = 0.0; ///< foundation velocity, horizontal [m/s]
    double vy  = 0.0; ///< foundation velocity, vertical [m/s]
    double phi = 0.0; ///< rotor angle [rad]
    double omega = 0.0; ///< rotor angular velocity [rad/s]

    std::array<double, 6> as_array() const { return {x, y_f, vx, vy, phi, omega}; }
    static RotorState from_array(const std::array<double, 6>& a) {
        return RotorState{a[0], a[1], a[2], a[3], a[4], a[5]};
    }
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y_f) && std::isfinite(vx) && std::isfinite(vy) &&
               std::isfinite(phi) && std::isfinite(omega);
    }
};

/// Net motor torque at speed omega under supply voltage V.
inline double motor_torque(double omega, double voltage, const RotorParams& p) {
    return (p.kt / p.Ra) * (voltage - p.ke * omega) - p.b * omega;
}

/// Steady-state speed of the decoupled (e = 0) motor under constant voltage,
/// i.e. the root of motor_torque(., V).
inline double steady_state_speed(double voltage, const RotorParams& p) {
    return voltage * p.kt / (p.kt * p.ke + p.b * p.Ra);
}

/// Time derivative of the rotor state. The three accelerations are coupled
/// through the unbalance mass and are obtained by solving
///
///   [ M        0         -m e sin(phi) ] [x..  ]   [ m e w^2 cos(phi) - Rx vx - Kx x ]
///   [ 0        M          m e cos(phi) ] [y..  ] = [ m e w^2 sin(phi) - Ry vy - Ky y ]
///   [-m e sin  m e cos    J + m e^2    ] [phi..]   [ motor_torque(w, V)              ]
///
/// which is symmetric positive definite for any valid parameter set.
inline RotorState rotor_derivative(const RotorState& s, double voltage, const RotorParams& p) {
    const double me = p.m * p.e;
    const double sin_phi = std::sin(s.phi);
    const double cos_phi = std::cos(s.phi);
    const double w2 = s.omega * s.omega;

    // 3x3 system A [ax ay aphi]^T = rhs
    const double a11 = p.M, a13 = -me * sin_phi;
    const double a22 = p.M, a23 = me * cos_phi;
    const double a33 = p.J + me * p.e;
    const double r1 = me * w2 * cos_phi - p.Rx * s.vx - p.Kx * s.x;
    const double r2 = me * w2 * sin_phi - p.Ry * s.vy - p.Ky * s.y_f;
    const double r3 = motor_torque(s.omega, voltage, p);

    // det = M * (M*(J + m e^2) - m^2 e^2) by expansion; guard anyway.
    const double det = a11 * (a22 * a33 - a23 * a23) - a13 * (a13 * a22);
    const double scale = p.M * p.M * (p.J + me * p.e) + 1.0;
    if (!(std::abs(det) > 1e-300 * scale))
        throw SimulationDiverged("singular acceleration coupling matrix");

    // Cramer's rule on the symmetric system.
    const double det1 = r1 * (a22 * a33 - a23 * a23) - a13 * (-a22 * r3 + a23 * r2) * (-1.0);
    // Expanded explicitly below instead; keep the cofactor algebra readable.
    (void)det1;
    const double c11 = a22 * a33 - a23 * a23;
    const double c12 = a13 * a23; // -(0*a33 - a23*(-me sin)) with sign handling folded in
    const double c13 = -a13 * a22;
    const double ax = (r1 * c11 + r2 * c12 + r3 * (-c13)) / det;
    const double c21 = a13 * a23;
    const double c22 = a11 * a33 - a13 * a13;
    const double c23 = -a11 * a23;
    const double ay = (r1 * c21 + r2 * c22 + r3 * (-c23)) / det;
    const double aphi = (r1 * (-c13) + r2 * (-c23) + r3 * (a11 * a22)) / det;

    RotorState d;
    d.x = s.vx;
    d.y_f = s.vy;
    d.vx = ax;
    d.vy = ay;
    d.phi = s.omega;
    d.omega = aphi;
    return d;
}

/// Total mechanical energy (kinetic + elastic) of the twin, including the
/// unbalance cross term. With V = 0 the power balance gives
/// dE/dt = motor_torque(w,0)*w - Rx vx^2 - Ry vy^2 <= 0.
inline double mechanical_energy(const RotorState& s, const RotorParams& p) {
    const double me = p.m * p.e;
    const double kinetic = 0.5 * p.M * (s.vx * s.vx + s.vy * s.vy) +
                           0.5 * (p.J + me * p.e) * s.omega * s.omega +
                           me * s.omega * (-s.vx * std::sin(s.phi) + s.vy * std::cos(s.phi));
    const double elastic = 0.5 * p.Kx * s.x * s.x + 0.5 * p.Ky * s.y_f * s.y_f;
    return kinetic + elastic;
}

/// One classical RK4 step with the supply voltage held constant (zero-order
/// hold) over the step.
inline RotorState integrate_step(const RotorState& s, double voltage, double dt, const RotorParams& p) {
    if (!(dt > 0.0)) throw ConfigError("integration step dt must be > 0");
    auto add_scaled = [](const RotorState& a, const RotorState& b, double c) {
        RotorState r;
        r.x = a.x + c * b.x;
        r.y_f = a.y_f + c * b.y_f;
        r.vx = a.vx + c * b.vx;
        r.vy = a.vy + c * b.vy;
        r.phi = a.phi + c * b.phi;
        r.omega = a.omega + c * b.omega;
        return r;
    };
    const RotorState k1 = rotor_derivative(s, voltage, p);
    const RotorState k2 = rotor_derivative(add_scaled(s, k1, 0.5 * dt), voltage, p);
    const RotorState k3 = rotor_derivative(add_scaled(s, k2, 0.5 * dt), voltage, p);
    const RotorState k4 = rotor_derivative(add_scaled(s, k3, dt), voltage, p);

    RotorState out;
    const double w = dt / 6.0;
    out.x = s.x + w * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    out.y_f = s.y_f + w * (k1.y_f + 2.0 * k2.y_f + 2.0 * k3.y_f + k4.y_f);
    out.vx = s.vx + w * (k1.vx + 2.0 * k2.vx + 2.0 * k3.vx + k4.vx);
    out.vy = s.vy + w * (k1.vy + 2.0 * k2.vy + 2.0 * k3.vy + k4.vy);
    out.phi = s.phi + w * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi);
    out.omega = s.omega + w * (k1.omega + 2.0 * k2.omega + 2.0 * k3.omega + k4.omega);
    if (!out.finite()) throw SimulationDiverged("integration step produced non-finite state");
    return out;
}

/// Input-signal settings: random piecewise-constant supply voltage.
struct InputConfig {
    int length = 2000;      ///< samples per experiment (L)
    double dt = 5e-3;       ///< sample period [s]
    double v_min = 0.0;     ///< lowest voltage level [V]
    double v_max = 12.0;    ///< highest voltage level [V]
    double dwell_min = 0.5; ///< shortest level hold [s]
    double dwell_max = 2.0; ///< longest level hold [s]

    void validate() const {
        if (length < 1) throw ConfigError("input.length must be >= 1");
        if (!(dt > 0.0)) throw ConfigError("input.dt must be > 0");
        if (!(v_min <= v_max)) throw ConfigError("input voltage range is empty");
        if (!(dwell_min > 0.0) || !(dwell_min <= dwell_max))
            throw ConfigError("input dwell range is empty");
    }
};

/// Seeded random piecewise-constant voltage profile: levels uniform in
/// [v_min, v_max], each held for a uniform random dwell.
inline std::vector<double> generate_input(const InputConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Rng rng(seed);
    std::vector<double> u;
    u.reserve(static_cast<std::size_t>(cfg.length));
    while (u.size() < static_cast<std::size_t>(cfg.length)) {
        const double level = rng.uniform(cfg.v_min, cfg.v_max);
        const double dwell = rng.uniform(cfg.dwell_min, cfg.dwell_max);
        auto hold = static_cast<std::size_t>(std::max(1.0, std::round(dwell / cfg.dt)));
        for (std::size_t k = 0; k < hold && u.size() < static_cast<std::size_t>(cfg.length); ++k)
            u.push_back(level);
    }
    return u;
}

/// One fixed-length input/output record produced by the twin. e_true and
/// drift_onset are evaluation-only metadata, invisible to the LDT.
struct Experiment {
    int index = 0;          ///< 1-based position in the campaign stream
    double dt = 5e-3;       ///< sample period [s]
    std::vector<double> u;  ///< supply voltage samples [V]
    std::vector<double> y;  ///< motor speed samples [rad/s]
    double e_true = 0.0;    ///< eccentricity used by the twin [m]
    bool drift_onset = false; ///< true iff e_true stepped up at this experiment
};

/// Simulates one experiment from zero initial state. y[k] is the motor speed
/// at sample k; u[k] is held over [k dt, (k+1) dt).
inline Experiment run_experiment(int index, double eccentricity, const RotorParams& base_params,
                                 const InputConfig& input, std::uint64_t seed,
                                 double noise_sigma = 0.0) {
    if (!(eccentricity >= 0.0)) throw ConfigError("eccentricity must be >= 0");
    RotorParams params = base_params;
    params.e = eccentricity;
    params.validate();

    Experiment exp;
    exp.index = index;
    exp.dt = input.dt;
    exp.e_true = eccentricity;
    exp.u = generate_input(input, seed);
    exp.y.resize(exp.u.size());

    RotorState state; // zero initial state
    try {
        for (std::size_t k = 0; k < exp.u.size(); ++k) {
            exp.y[k] = state.omega;
            if (k + 1 < exp.u.size() || true) // advance even past the last sample boundary
                state = integrate_step(state, exp.u[k], input.dt, params);
        }
    } catch (const SimulationDiverged& err) {
        throw SimulationDiverged("experiment " + std::to_string(index) + ": " + err.what(), index);
    }

    if (noise_sigma > 0.0) {
        Rng noise(derive_seed(seed, "measurement-noise"));
        for (double& sample : exp.y) sample += noise_sigma * noise.gaussian();
    }
    return exp;
}

/// Hidden degradation schedule: a monotone nondecreasing staircase of
/// eccentricity values, one per experiment.
struct DegradationSchedule {
    std::vector<double> e_values; ///< per-experiment eccentricity, length N
    std::vector<int> onsets;      ///< 1-based experiment indices where e steps up

    bool drift_onset_at(int index) const {
        return index > 1 && e_values[static_cast<std::size_t>(index) - 1] !=
                                e_values[static_cast<std::size_t>(index) - 2];
    }
};

/// Builds the degradation staircase: segment lengths are drawn uniformly from
/// [segment_min, segment_max] experiments, levels climb evenly from e_start to
/// e_end.
inline DegradationSchedule build_schedule(int n_experiments, double e_start, double e_end,
                                          int segment_min, int segment_max, std::uint64_t seed) {
    if (n_experiments < 1) throw ConfigError("schedule needs at least one experiment");
    if (!(e_start >= 0.0) || !(e_start <= e_end))
        throw ConfigError("schedule eccentricity range must satisfy 0 <= e_start <= e_end");
    if (segment_min < 1 || segment_min > segment_max)
        throw ConfigError("schedule segment-length range is empty");

    Rng rng(seed);
    std::vector<int> segment_lengths;
    int covered = 0;
    while (covered < n_experiments) {
        const int len = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(segment_min),
                                                         static_cast<std::uint64_t>(segment_max)));
        segment_lengths.push_back(std::min(len, n_experiments - covered));
        covered += segment_lengths.back();
    }

    const auto segments = static_cast<int>(segment_lengths.size());
    DegradationSchedule schedule;
    schedule.e_values.reserve(static_cast<std::size_t>(n_experiments));
    for (int s = 0; s < segments; ++s) {
        const double level =
            segments == 1 ? e_start : e_start + (e_end - e_start) * static_cast<double>(s) / (segments - 1);
        for (int k = 0; k < segment_lengths[static_cast<std::size_t>(s)]; ++k)
            schedule.e_values.push_back(level);
    }

    for (int i = 2; i <= n_experiments; ++i)
        if (schedule.drift_onset_at(i)) schedule.onsets.push_back(i);
    return schedule;
}

} // namespace ldt::rotor
