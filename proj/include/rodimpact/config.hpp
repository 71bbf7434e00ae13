#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rodimpact/oracle.hpp"
#include "rodimpact/schwarz.hpp"

namespace rodimpact {

// Contact formulation driven by one experiment config.
enum class Method {
    Schwarz,
    PenaltyExplicit,
    PenaltyImplicit,
    LagrangeExplicit,
    LagrangeImplicit,
};

std::string method_name(Method m);
Method method_from_name(const std::string& name);
bool is_penalty(Method m);
bool is_lagrange(Method m);

// Tri-state choices that resolve against the integrator preset (form) or the
// scheme family (lumping) when left on Auto. Auto survives the config
// round-trip unchanged; it is resolved only when a run is assembled.
enum class FormChoice { Auto, Implicit, Explicit };
enum class LumpChoice { Auto, Lumped, Consistent };

// Discretization and coupling role of one rod. For the conventional
// (monolithic) methods the two blocks must agree on n_elements/dt/lumping and
// the preset/form/role keys must stay untouched.
struct SubdomainConfig {
    int n_elements = 200;
    double dt = 1e-7;
    std::string preset = "classic_newmark";
    FormChoice form = FormChoice::Auto;
    LumpChoice lumping = LumpChoice::Auto;
    Role role = Role::Dirichlet;

    bool operator==(const SubdomainConfig&) const = default;
};

// Coupling-loop controls. `interval` also sets the reporting cadence of the
// conventional methods (series rows land on controller stops for every
// method, so CSVs align row-for-row).
struct ControllerConfig {
    double interval = 1e-7;
    double tol_rel = 1e-12;
    double tol_abs = 1e-15;
    int max_iterations = 100;
    int max_status_flips = 3;

    bool operator==(const ControllerConfig&) const = default;
};

struct OutputConfig {
    std::string dir = "out";
    std::string prefix = "experiment";
    std::string label;           // row label; empty = derived from the method
    bool debug_substeps = false; // also dump the sub-step series (conventional methods)

    bool operator==(const OutputConfig&) const = default;
};

// One config can describe a family of runs varying a single parameter.
// n_elements and dt apply to both subdomains (a dt sweep moves the controller
// interval along with it); a preset sweep swaps the integrator preset on both
// sides, resolving each preset's form against the subdomain's form choice.
enum class SweepParameter { None, ElementCount, TimeStep, Preset };

struct SweepConfig {
    SweepParameter parameter = SweepParameter::None;
    std::vector<int> n_values;
    std::vector<double> dt_values;
    std::vector<std::string> preset_values;

    bool active() const { return parameter != SweepParameter::None; }
    std::size_t size() const;

    bool operator==(const SweepConfig&) const = default;
};

struct ExperimentConfig {
    BenchmarkSpec benchmark;
    Method method = Method::Schwarz;
    SubdomainConfig subdomain1{};
    SubdomainConfig subdomain2{.role = Role::Neumann};
    ControllerConfig controller;
    double tau = 0.0;  // penalty spring stiffness (N/m); 0 = not set
    OutputConfig output;
    SweepConfig sweep;

    // Throws ValidationError naming the violated invariant: benchmark sanity,
    // divisibility (each dt into the interval, the interval into the time
    // span), exactly one Dirichlet and one Neumann role, resolvable presets,
    // tau present for penalty methods and absent otherwise, and — for the
    // monolithic methods — matching subdomain discretizations with the
    // coupling-only keys (preset, form) left on their defaults.
    void validate() const;

    bool operator==(const ExperimentConfig&) const = default;
};

// The integrator spec a subdomain block denotes, with Auto form resolved:
// dual-form presets default to implicit, single-form presets pick their own
// form. An explicit FormChoice clashing with a single-form preset throws.
IntegratorSpec resolve_integrator(const SubdomainConfig& sd);
// Lumped-mass flag with Auto resolved from the integrator (explicit schemes
// lump, implicit ones keep the consistent matrix).
bool resolve_lumping(const SubdomainConfig& sd, const IntegratorSpec& integrator);

// The one-run configs a sweep block denotes, in value order: each entry is
// the base config with the swept parameter substituted (dt sweeps move the
// controller interval along), the sweep block cleared, the label suffixed
// with the value, and the output prefix suffixed with a filename-safe slug.
// Every entry is validated. Throws ValidationError without a sweep block.
std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& config);

// Parses the INI-style experiment grammar (see README: [section] headers,
// key = value pairs, '#' comments) and returns the fully validated config
// with defaults applied. Unknown sections or keys, duplicate keys, malformed
// numbers and structural noise raise ParseError carrying the line number;
// semantic violations raise ValidationError.
ExperimentConfig parse_config(std::string_view text);

// Canonical emitter: every resolved setting spelled out, floats in shortest
// round-trip form, optional blocks omitted when inactive. parse(emit(c)) == c.
std::string emit_config(const ExperimentConfig& config);

}  // namespace rodimpact
