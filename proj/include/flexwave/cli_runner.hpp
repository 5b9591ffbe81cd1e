#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flexwave/physics_core.hpp"
#include "flexwave/stability_ffh.hpp"
#include "flexwave/traveling_solver.hpp"

namespace flexwave {

inline constexpr const char* kVersion = "0.1.0";

enum class Command { Dispersion, Nls, Resonance, Collisions, Branch, Stability, Compare };

const char* to_string(Command command);
Command parse_command(const std::string& text);

/// Everything a run needs. Defaults are listed in the README reference table.
struct RunConfig {
    Command command = Command::Branch;
    PhysicalParams params;
    std::vector<IceModel> models{IceModel::LinearBiharmonic, IceModel::NonlinearCosserat};
    SolverConfig solver;
    std::filesystem::path output_dir = "out";

    double a1_max = 0.01;
    std::string resume;  ///< branch CSV to continue from

    // dispersion
    double k_min = 0.1;
    double k_max = 3.0;
    int k_count = 30;

    // nls: explicit list, or a uniform grid over [D_min, D_max]
    std::vector<double> D_list;
    double D_min = 0.0;
    double D_max = 0.12;
    int D_count = 121;

    // resonance
    std::vector<int> K_list{7, 10};

    // collisions; unset speed means the bifurcation speed
    std::optional<double> speed;
    int collision_modes = 10;

    // stability / compare
    int mu_count = 401;
    bool refine = true;
    int hill_modes = 32;
    std::vector<double> stability_a1;  ///< empty: last branch point only
    OverlaySign overlay_sign = OverlaySign::GroupMinusSpeed;
    int threads = 0;

    void validate() const;
};

/// Flat `key = value` text; `#` starts a comment. Unknown keys are rejected.
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

/// Applies one setting; throws ConfigError on unknown keys or malformed values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Executes the command and writes its artifacts. Returns the process exit code:
/// 0 success, 2 configuration error, 3 numerical failure. Failures leave an
/// error.json record next to whatever was already written.
int run(const RunConfig& config, std::ostream& log);

void write_branch_csv(const std::filesystem::path& path, const BifurcationBranch& branch);
/// Reads rows `c, a1..aN`; trailing zero padding is dropped per row.
BifurcationBranch read_branch_csv(const std::filesystem::path& path, const PhysicalParams& params,
                                  IceModel model);

void write_spectrum_csv(const std::filesystem::path& path, const FloquetSpectrum& spectrum);

}  // namespace flexwave
