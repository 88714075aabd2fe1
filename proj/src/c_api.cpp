#include "ddgeo/ddgeo.h"

#include <cstring>
#include <memory>
#include <string>

#include "ddgeo/attack.hpp"
#include "ddgeo/data_driven.hpp"
#include "ddgeo/io.hpp"
#include "ddgeo/oracle.hpp"
#include "ddgeo/verification.hpp"

struct ddgeo_system {
    ddgeo::LtiSystem sys;
};

struct ddgeo_data {
    ddgeo::ExperimentData data;
};

struct ddgeo_subspace {
    ddgeo::Subspace s;
};

struct ddgeo_trajectory {
    ddgeo::SingleTrajectory traj;
};

struct ddgeo_attack_plan {
    ddgeo::AttackPlan plan;
};

struct ddgeo_attack_outcome {
    ddgeo::AttackOutcome outcome;
    ddgeo::Subspace rstar;
};

namespace {

using ddgeo::Mat;
using ddgeo::Vec;

thread_local std::string last_error;

ddgeo_status record(ddgeo_status status, const char* what) {
    last_error = what;
    return status;
}

template <typename F>
ddgeo_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return DDGEO_OK;
    } catch (const ddgeo::Error& e) {
        return record(static_cast<ddgeo_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return record(DDGEO_INTERNAL_ERROR, "out of memory");
    } catch (const std::exception& e) {
        return record(DDGEO_INTERNAL_ERROR, e.what());
    } catch (...) {
        return record(DDGEO_INTERNAL_ERROR, "unknown error");
    }
}

void require(const void* p, const char* name) {
    if (p == nullptr) ddgeo::fail(ddgeo::ErrorCode::InvalidArgument, std::string(name) + " must not be null");
}

ddgeo::Tolerances tolerances(const ddgeo_tolerances* tol) {
    ddgeo::Tolerances out;
    if (tol != nullptr) out = {tol->rank_rel, tol->subspace_eq, tol->residual_abs};
    out.validate();
    return out;
}

Mat from_row_major(const double* values, size_t rows, size_t cols) {
    const auto r = static_cast<Eigen::Index>(rows), c = static_cast<Eigen::Index>(cols);
    if (rows * cols == 0) return Mat(r, c);
    require(values, "matrix data");
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(values, r, c);
}

void to_row_major(const Mat& m, double* out) {
    if (m.size() == 0) return;
    require(out, "output buffer");
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(out, m.rows(), m.cols()) = m;
}

char* duplicate(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename T, typename... Args>
void emit(T** out, Args&&... args) {
    require(out, "output handle");
    *out = new T{std::forward<Args>(args)...};
}

void write_zeros(const std::vector<std::complex<double>>& zeros, double* re, double* im, size_t capacity,
                 size_t* count) {
    require(count, "count");
    if (zeros.size() > capacity) {
        ddgeo::fail(ddgeo::ErrorCode::InvalidArgument,
                    "zero buffer holds " + std::to_string(capacity) + ", need " + std::to_string(zeros.size()));
    }
    if (!zeros.empty()) {
        require(re, "re");
        require(im, "im");
    }
    for (size_t i = 0; i < zeros.size(); ++i) {
        re[i] = zeros[i].real();
        im[i] = zeros[i].imag();
    }
    *count = zeros.size();
}

Mat gain_matrix(const ddgeo::LtiSystem& sys, const double* gain) {
    return from_row_major(gain, static_cast<size_t>(sys.m()), static_cast<size_t>(sys.n()));
}

}  // namespace

extern "C" {

const char* ddgeo_version(void) { return "0.1.0"; }

const char* ddgeo_last_error(void) { return last_error.c_str(); }

const char* ddgeo_status_name(ddgeo_status status) {
    switch (status) {
        case DDGEO_OK: return "ok";
        case DDGEO_INVALID_ARGUMENT: return "invalid argument";
        case DDGEO_DIMENSION_MISMATCH: return "dimension mismatch";
        case DDGEO_NOT_PERSISTENTLY_EXCITING: return "not persistently exciting";
        case DDGEO_HORIZON_TOO_SHORT: return "horizon too short";
        case DDGEO_NOT_CONTROLLED_INVARIANT: return "not controlled invariant";
        case DDGEO_TRAJECTORY_NOT_INFORMATIVE: return "trajectory not informative";
        case DDGEO_RESIDUAL_EXCEEDS_TOLERANCE: return "residual exceeds tolerance";
        case DDGEO_DEGENERATE_SYSTEM: return "degenerate system";
        case DDGEO_BLOCK_TRIANGULARIZATION_FAILED: return "block triangularization failed";
        case DDGEO_NO_STEALTHY_ATTACK: return "no stealthy attack exists";
        case DDGEO_IO_ERROR: return "i/o error";
        case DDGEO_PARSE_ERROR: return "parse error";
        case DDGEO_INTERNAL_ERROR: return "internal error";
    }
    return "unknown status";
}

void ddgeo_string_free(char* s) { std::free(s); }

ddgeo_tolerances ddgeo_default_tolerances(void) {
    const ddgeo::Tolerances t;
    return {t.rank_rel, t.subspace_eq, t.residual_abs};
}

// --- systems

ddgeo_status ddgeo_system_create(size_t n, size_t m, size_t p, const double* a, const double* b, const double* c,
                                 ddgeo_system** out) {
    return guarded([&] {
        if (n == 0 || m == 0 || p == 0) ddgeo::fail(ddgeo::ErrorCode::InvalidArgument, "n, m, p must be >= 1");
        emit(out, ddgeo::LtiSystem(from_row_major(a, n, n), from_row_major(b, n, m), from_row_major(c, p, n)));
    });
}

ddgeo_status ddgeo_system_consensus(ddgeo_system** out) {
    return guarded([&] { emit(out, ddgeo::consensus_example()); });
}

ddgeo_status ddgeo_system_random(size_t n, size_t m, size_t p, uint64_t seed, ddgeo_system** out) {
    return guarded([&] {
        emit(out, ddgeo::random_system(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m),
                                       static_cast<Eigen::Index>(p), seed));
    });
}

ddgeo_status ddgeo_system_siso(const double* zeros, size_t zero_count, const double* poles, size_t pole_count,
                               ddgeo_system** out) {
    return guarded([&] {
        if (zero_count > 0) require(zeros, "zeros");
        require(poles, "poles");
        emit(out, ddgeo::siso_from_zeros_poles(std::vector<double>(zeros, zeros + zero_count),
                                               std::vector<double>(poles, poles + pole_count)));
    });
}

ddgeo_status ddgeo_system_load(const char* dir, ddgeo_system** out) {
    return guarded([&] {
        require(dir, "dir");
        emit(out, ddgeo::io::load_system(dir));
    });
}

ddgeo_status ddgeo_system_save(const ddgeo_system* sys, const char* dir) {
    return guarded([&] {
        require(sys, "system");
        require(dir, "dir");
        ddgeo::io::save_system(dir, sys->sys);
    });
}

ddgeo_status ddgeo_system_dims(const ddgeo_system* sys, size_t* n, size_t* m, size_t* p) {
    return guarded([&] {
        require(sys, "system");
        if (n) *n = static_cast<size_t>(sys->sys.n());
        if (m) *m = static_cast<size_t>(sys->sys.m());
        if (p) *p = static_cast<size_t>(sys->sys.p());
    });
}

void ddgeo_system_free(ddgeo_system* sys) { delete sys; }

// --- data

ddgeo_status ddgeo_collect(const ddgeo_system* sys, size_t horizon, size_t experiments, uint64_t seed,
                           const ddgeo_tolerances* tol, ddgeo_data** out) {
    return guarded([&] {
        require(sys, "system");
        ddgeo::ExperimentConfig cfg;
        cfg.horizon = static_cast<Eigen::Index>(horizon);
        cfg.experiments = static_cast<Eigen::Index>(experiments);
        cfg.seed = seed;
        emit(out, ddgeo::collect(sys->sys, cfg, tolerances(tol)));
    });
}

ddgeo_status ddgeo_data_load(const char* dir, const ddgeo_tolerances* tol, ddgeo_data** out) {
    return guarded([&] {
        require(dir, "dir");
        emit(out, ddgeo::io::load_experiment(dir, tolerances(tol)));
    });
}

ddgeo_status ddgeo_data_save(const ddgeo_data* data, const char* dir) {
    return guarded([&] {
        require(data, "data");
        require(dir, "dir");
        ddgeo::io::save_experiment(dir, data->data);
    });
}

ddgeo_status ddgeo_data_dims(const ddgeo_data* data, size_t* n, size_t* m, size_t* p, size_t* horizon,
                             size_t* experiments) {
    return guarded([&] {
        require(data, "data");
        const auto& d = data->data;
        if (n) *n = static_cast<size_t>(d.n());
        if (m) *m = static_cast<size_t>(d.m());
        if (p) *p = static_cast<size_t>(d.p());
        if (horizon) *horizon = static_cast<size_t>(d.horizon());
        if (experiments) *experiments = static_cast<size_t>(d.experiments());
    });
}

ddgeo_status ddgeo_data_persistently_exciting(const ddgeo_data* data, const ddgeo_tolerances* tol, int* result) {
    return guarded([&] {
        require(data, "data");
        require(result, "result");
        *result = ddgeo::is_persistently_exciting(data->data, tolerances(tol)) ? 1 : 0;
    });
}

void ddgeo_data_free(ddgeo_data* data) { delete data; }

// --- subspaces

ddgeo_status ddgeo_subspace_from_data(const ddgeo_data* data, ddgeo_subspace_kind kind, const ddgeo_tolerances* tol,
                                      ddgeo_subspace** out) {
    return guarded([&] {
        require(data, "data");
        const auto t = tolerances(tol);
        switch (kind) {
            case DDGEO_VSTAR: emit(out, ddgeo::vstar_dd(data->data, t)); return;
            case DDGEO_SSTAR: emit(out, ddgeo::sstar_dd(data->data, t)); return;
            case DDGEO_RSTAR: emit(out, ddgeo::rstar_dd(data->data, t)); return;
        }
        ddgeo::fail(ddgeo::ErrorCode::InvalidArgument, "unknown subspace kind");
    });
}

ddgeo_status ddgeo_subspace_from_model(const ddgeo_system* sys, ddgeo_subspace_kind kind, const ddgeo_tolerances* tol,
                                       ddgeo_subspace** out) {
    return guarded([&] {
        require(sys, "system");
        const auto t = tolerances(tol);
        switch (kind) {
            case DDGEO_VSTAR: emit(out, ddgeo::vstar_model(sys->sys, t)); return;
            case DDGEO_SSTAR: emit(out, ddgeo::sstar_model(sys->sys, t)); return;
            case DDGEO_RSTAR: emit(out, ddgeo::rstar_model(sys->sys, t)); return;
        }
        ddgeo::fail(ddgeo::ErrorCode::InvalidArgument, "unknown subspace kind");
    });
}

ddgeo_status ddgeo_subspace_dims(const ddgeo_subspace* s, size_t* ambient_dim, size_t* dim) {
    return guarded([&] {
        require(s, "subspace");
        if (ambient_dim) *ambient_dim = static_cast<size_t>(s->s.ambient_dim());
        if (dim) *dim = static_cast<size_t>(s->s.dim());
    });
}

ddgeo_status ddgeo_subspace_basis(const ddgeo_subspace* s, double* basis) {
    return guarded([&] {
        require(s, "subspace");
        to_row_major(s->s.basis(), basis);
    });
}

ddgeo_status ddgeo_subspace_json(const ddgeo_subspace* s, char** json) {
    return guarded([&] {
        require(s, "subspace");
        require(json, "json");
        *json = duplicate(ddgeo::io::subspace_to_json(s->s).dump());
    });
}

ddgeo_status ddgeo_principal_angle(const ddgeo_subspace* a, const ddgeo_subspace* b, double* radians) {
    return guarded([&] {
        require(a, "subspace a");
        require(b, "subspace b");
        require(radians, "radians");
        *radians = ddgeo::principal_angle_max(a->s, b->s);
    });
}

void ddgeo_subspace_free(ddgeo_subspace* s) { delete s; }

// --- trajectories

ddgeo_status ddgeo_trajectory_create(size_t n, size_t m, size_t horizon, const double* states, const double* inputs,
                                     ddgeo_trajectory** out) {
    return guarded([&] {
        if (n == 0 || m == 0 || horizon == 0) {
            ddgeo::fail(ddgeo::ErrorCode::InvalidArgument, "n, m and horizon must be >= 1");
        }
        emit(out, ddgeo::SingleTrajectory(from_row_major(states, n, horizon + 1), from_row_major(inputs, m, horizon)));
    });
}

ddgeo_status ddgeo_trajectory_random(const ddgeo_system* sys, size_t horizon, uint64_t seed, ddgeo_trajectory** out) {
    return guarded([&] {
        require(sys, "system");
        emit(out, ddgeo::random_trajectory(sys->sys, static_cast<Eigen::Index>(horizon), seed));
    });
}

void ddgeo_trajectory_free(ddgeo_trajectory* traj) { delete traj; }

// --- feedback and zeros

ddgeo_status ddgeo_feedback(const ddgeo_trajectory* traj, const ddgeo_subspace* v, const ddgeo_tolerances* tol,
                            double* gain, double* residual) {
    return guarded([&] {
        require(traj, "trajectory");
        require(v, "subspace");
        const auto f = ddgeo::closed_loop_factor(traj->traj, v->s, tolerances(tol));
        to_row_major(f.gain, gain);
        if (residual) *residual = f.residual;
    });
}

ddgeo_status ddgeo_invariance_residual(const ddgeo_system* sys, const double* gain, const ddgeo_subspace* v,
                                       double* residual) {
    return guarded([&] {
        require(sys, "system");
        require(v, "subspace");
        require(residual, "residual");
        const auto& s = sys->sys;
        *residual = ddgeo::invariance_residual(s.A() + s.B() * gain_matrix(s, gain), v->s);
    });
}

ddgeo_status ddgeo_closed_loop_drift(const ddgeo_system* sys, const double* gain, const ddgeo_subspace* v, int steps,
                                     double* drift) {
    return guarded([&] {
        require(sys, "system");
        require(v, "subspace");
        require(drift, "drift");
        if (steps < 0) ddgeo::fail(ddgeo::ErrorCode::InvalidArgument, "steps must be non-negative");
        const auto& s = sys->sys;
        *drift = ddgeo::closed_loop_drift(s.A() + s.B() * gain_matrix(s, gain), v->s, steps);
    });
}

ddgeo_status ddgeo_zeros(const ddgeo_trajectory* traj, const ddgeo_subspace* vstar, const ddgeo_tolerances* tol,
                         double* re, double* im, size_t capacity, size_t* count) {
    return guarded([&] {
        require(traj, "trajectory");
        require(vstar, "subspace");
        write_zeros(ddgeo::zeros_dd(traj->traj, vstar->s, tolerances(tol)), re, im, capacity, count);
    });
}

ddgeo_status ddgeo_zeros_model(const ddgeo_system* sys, const ddgeo_tolerances* tol, double* re, double* im,
                               size_t capacity, size_t* count) {
    return guarded([&] {
        require(sys, "system");
        write_zeros(ddgeo::invariant_zeros_model(sys->sys, tolerances(tol)), re, im, capacity, count);
    });
}

ddgeo_status ddgeo_zero_membership(const ddgeo_data* data, const ddgeo_subspace* vstar, double re, double im,
                                   const ddgeo_tolerances* tol, int* is_zero, size_t* kernel_dim) {
    return guarded([&] {
        require(data, "data");
        require(vstar, "subspace");
        require(is_zero, "is_zero");
        const auto c = ddgeo::zero_membership_dd(data->data, vstar->s, {re, im}, tolerances(tol));
        *is_zero = c.is_zero ? 1 : 0;
        if (kernel_dim) *kernel_dim = static_cast<size_t>(c.kernel_dim);
    });
}

// --- attacks

ddgeo_status ddgeo_attack_design(const ddgeo_data* data, const ddgeo_tolerances* tol, double energy, size_t onset_step,
                                 ddgeo_attack_plan** out) {
    return guarded([&] {
        require(data, "data");
        emit(out, ddgeo::design_attack(data->data, tolerances(tol), energy, static_cast<Eigen::Index>(onset_step)));
    });
}

ddgeo_status ddgeo_attack_plan_info(const ddgeo_attack_plan* plan, size_t* horizon, size_t* m, size_t* generator_count,
                                    size_t* rstar_dim) {
    return guarded([&] {
        require(plan, "plan");
        const auto& p = plan->plan;
        if (horizon) *horizon = static_cast<size_t>(p.horizon);
        if (m) *m = static_cast<size_t>(p.m);
        if (generator_count) *generator_count = static_cast<size_t>(p.generators.cols());
        if (rstar_dim) *rstar_dim = static_cast<size_t>(p.rstar.dim());
    });
}

ddgeo_status ddgeo_attack_plan_input(const ddgeo_attack_plan* plan, double* attack) {
    return guarded([&] {
        require(plan, "plan");
        to_row_major(plan->plan.attack, attack);
    });
}

void ddgeo_attack_plan_free(ddgeo_attack_plan* plan) { delete plan; }

ddgeo_status ddgeo_attack_simulate(const ddgeo_system* sys, const ddgeo_attack_plan* plan, const double* nominal_input,
                                   const double* x0, size_t total_steps, ddgeo_attack_outcome** out) {
    return guarded([&] {
        require(sys, "system");
        require(plan, "plan");
        const auto& s = sys->sys;
        const Vec u = from_row_major(nominal_input, static_cast<size_t>(s.m()), 1);
        const Vec x = x0 != nullptr ? Vec(from_row_major(x0, static_cast<size_t>(s.n()), 1)) : Vec::Zero(s.n());
        emit(out, ddgeo::simulate_attack(s, plan->plan, u, x, static_cast<Eigen::Index>(total_steps)), plan->plan.rstar);
    });
}

ddgeo_status ddgeo_attack_outcome_summary(const ddgeo_attack_outcome* outcome, double* max_state_deviation,
                                          double* max_output_deviation, double* rstar_distance) {
    return guarded([&] {
        require(outcome, "outcome");
        const auto& o = outcome->outcome;
        if (max_state_deviation) *max_state_deviation = o.state_deviation.maxCoeff();
        if (max_output_deviation) *max_output_deviation = o.output_deviation.maxCoeff();
        if (rstar_distance) {
            *rstar_distance = outcome->rstar.distances(o.attacked_states - o.nominal_states).maxCoeff();
        }
    });
}

ddgeo_status ddgeo_attack_detect(const ddgeo_attack_outcome* outcome, double threshold, int* detected) {
    return guarded([&] {
        require(outcome, "outcome");
        require(detected, "detected");
        *detected = ddgeo::detect(outcome->outcome, threshold) ? 1 : 0;
    });
}

ddgeo_status ddgeo_attack_outcome_csv(const ddgeo_attack_outcome* outcome, char** csv) {
    return guarded([&] {
        require(outcome, "outcome");
        require(csv, "csv");
        *csv = duplicate(ddgeo::attack_outcome_csv(outcome->outcome));
    });
}

void ddgeo_attack_outcome_free(ddgeo_attack_outcome* outcome) { delete outcome; }

// --- verification

ddgeo_status ddgeo_verify(int trials, uint64_t seed, const ddgeo_tolerances* tol, int* failures, char** report) {
    return guarded([&] {
        require(failures, "failures");
        ddgeo::VerificationConfig cfg;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.tol = tolerances(tol);
        const auto r = ddgeo::run_verification(cfg);
        std::unique_ptr<char, decltype(&std::free)> text(report ? duplicate(r.to_json().dump()) : nullptr, &std::free);
        *failures = r.failures();
        if (report) *report = text.release();
    });
}

}  // extern "C"
