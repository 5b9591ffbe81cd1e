#include "flexwave/cli_runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "flexwave/linear_theory.hpp"

namespace flexwave {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double x = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
    }
}

long parse_long(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long x = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' expects an integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
    if (value == "0" || value == "false" || value == "no" || value == "off") return false;
    throw ConfigError("'" + key + "' expects a boolean, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

class OutputFile {
public:
    explicit OutputFile(const fs::path& path) : path_(path), out_(path) {
        if (!out_) throw ConfigError("cannot write " + path.string());
    }
    std::ofstream& stream() { return out_; }
    void close() {
        out_.close();
        if (!out_) throw FormatError("failed writing " + path_.string());
    }

private:
    fs::path path_;
    std::ofstream out_;
};

json params_json(const PhysicalParams& p) {
    return {{"g", p.g}, {"h", p.h.to_string()}, {"D", p.D}};
}

json config_json(const RunConfig& c) {
    json models = json::array();
    for (auto m : c.models) models.push_back(to_string(m));
    const SolverConfig& s = c.solver;
    return {
        {"command", to_string(c.command)},
        {"params", params_json(c.params)},
        {"models", models},
        {"solver",
         {{"residual_tol", s.residual_tol},
          {"max_newton_iters", s.max_newton_iters},
          {"jacobian_step", s.jacobian_step},
          {"tail_threshold", s.tail_threshold},
          {"amplitude_step", s.amplitude_step},
          {"min_amplitude_step", s.min_amplitude_step},
          {"grid_oversample", s.grid_oversample},
          {"initial_modes", s.initial_modes},
          {"max_modes", s.max_modes}}},
        {"output_dir", c.output_dir.string()},
        {"a1_max", c.a1_max},
        {"resume", c.resume},
        {"k_min", c.k_min},
        {"k_max", c.k_max},
        {"k_count", c.k_count},
        {"D_list", c.D_list},
        {"D_min", c.D_min},
        {"D_max", c.D_max},
        {"D_count", c.D_count},
        {"K_list", c.K_list},
        {"speed", c.speed ? json(*c.speed) : json(nullptr)},
        {"collision_modes", c.collision_modes},
        {"mu_count", c.mu_count},
        {"refine", c.refine},
        {"hill_modes", c.hill_modes},
        {"stability_a1", c.stability_a1},
        {"overlay_sign", c.overlay_sign == OverlaySign::GroupMinusSpeed ? "group-minus-speed"
                                                                        : "speed-minus-group"},
    };
}

json branch_json(const BifurcationBranch& branch) {
    json points = json::array();
    for (const auto& p : branch.points) {
        points.push_back({{"a1", p.wave.profile.coefficient(1)},
                          {"c", p.wave.c},
                          {"modes", p.wave.profile.modes()},
                          {"residual_norm", p.residual_norm},
                          {"newton_iterations", p.newton_iterations},
                          {"tail_resolved", p.tail_resolved}});
    }
    return {{"model", to_string(branch.model)}, {"points", points}};
}

std::string model_tag(IceModel model) {
    return model == IceModel::LinearBiharmonic ? "linear" : "nonlinear";
}

// Each command fills `meta` as it goes so that a failure still reports what was done.
struct Context {
    const RunConfig& config;
    std::ostream& log;
    json meta;
    std::vector<std::string> files;

    fs::path path(const std::string& name) {
        files.push_back(name);
        return config.output_dir / name;
    }
};

void run_dispersion(Context& ctx) {
    const RunConfig& c = ctx.config;
    OutputFile out(ctx.path("dispersion.csv"));
    out.stream() << "k,omega,omega_p,omega_pp\n";
    for (int i = 0; i < c.k_count; ++i) {
        const double k =
            c.k_count == 1 ? c.k_min : c.k_min + (c.k_max - c.k_min) * i / static_cast<double>(c.k_count - 1);
        const DispersionJet jet = dispersion_jet(k, c.params);
        out.stream() << num(k) << ',' << num(jet.omega) << ',' << num(jet.omega_p) << ','
                     << num(jet.omega_pp) << '\n';
    }
    out.close();
}

void run_nls(Context& ctx) {
    const RunConfig& c = ctx.config;
    std::vector<double> grid = c.D_list;
    if (grid.empty()) {
        for (int i = 0; i < c.D_count; ++i) {
            grid.push_back(c.D_count == 1 ? c.D_min
                                          : c.D_min + (c.D_max - c.D_min) * i / static_cast<double>(c.D_count - 1));
        }
        // Rows at the exact transition values, when they fall inside the range.
        const double g = c.params.g;
        for (double special : {omega_pp_sign_change_rigidity(g, 1), g / 14.0}) {
            if (special >= c.D_min && special <= c.D_max) grid.push_back(special);
        }
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    }
    OutputFile out(ctx.path("nls.csv"));
    out.stream() << "D,omega_pp,M_linear,M_nonlinear,focusing_linear,focusing_nonlinear,pole\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double D : grid) {
        PhysicalParams p = c.params;
        p.D = D;
        p.validate();
        double omega_pp = nan, m_lin = nan, m_tol = nan;
        int f_lin = 0, f_tol = 0, pole = 0;
        try {
            const auto lin = nls_coefficients(IceModel::LinearBiharmonic, 1, p);
            const auto tol = nls_coefficients(IceModel::NonlinearCosserat, 1, p);
            omega_pp = lin.omega_pp;
            m_lin = lin.M;
            m_tol = tol.M;
            f_lin = lin.focusing();
            f_tol = tol.focusing();
        } catch (const WiltonPole&) {
            pole = 1;
            omega_pp = dispersion_jet(1.0, p).omega_pp;
        }
        out.stream() << num(D) << ',' << num(omega_pp) << ',' << num(m_lin) << ',' << num(m_tol) << ','
                     << f_lin << ',' << f_tol << ',' << pole << '\n';
    }
    out.close();
}

void run_resonance(Context& ctx) {
    const RunConfig& c = ctx.config;
    OutputFile out(ctx.path("resonance.csv"));
    out.stream() << "K,h,D\n";
    for (int K : c.K_list) {
        out.stream() << K << ',' << c.params.h.to_string() << ',' << num(resonant_rigidity(K, c.params)) << '\n';
    }
    out.close();
}

void run_collisions(Context& ctx) {
    const RunConfig& c = ctx.config;
    const double speed = c.speed ? *c.speed : bifurcation_speed(c.params);
    CollisionOptions options;
    options.m_max = c.collision_modes;
    const auto records = find_collisions(c.params, speed, options);
    OutputFile out(ctx.path("collisions.csv"));
    out.stream() << "mu,m1,s1,m2,s2,im_lambda\n";
    for (const auto& r : records) {
        out.stream() << num(r.mu) << ',' << r.m1 << ',' << r.s1 << ',' << r.m2 << ',' << r.s2 << ','
                     << num(r.lambda.imag()) << '\n';
    }
    out.close();
    ctx.meta["speed"] = speed;
    ctx.meta["collisions"] = records.size();
}

BifurcationBranch compute_branch(Context& ctx, IceModel model) {
    const RunConfig& c = ctx.config;
    if (!c.resume.empty()) {
        BifurcationBranch prior = read_branch_csv(c.resume, c.params, model);
        ctx.log << "resuming " << to_string(model) << " branch from " << c.resume << " ("
                << prior.points.size() << " points)\n";
        return continue_branch(std::move(prior), c.a1_max, c.solver);
    }
    return continue_branch(c.params, model, c.a1_max, c.solver);
}

void write_nls_overlay(Context& ctx, const BifurcationBranch& branch) {
    if (!ctx.config.params.h.is_infinite()) return;
    NlsCoefficients coeffs;
    try {
        coeffs = nls_coefficients(branch.model, 1, ctx.config.params);
    } catch (const WiltonPole&) {
        return;
    }
    OutputFile out(ctx.path("branch_" + model_tag(branch.model) + "_nls.csv"));
    out.stream() << "a1,c_nls\n";
    for (const auto& p : branch.points) {
        const double a1 = p.wave.profile.coefficient(1);
        // The envelope amplitude is half the cosine amplitude.
        out.stream() << num(a1) << ',' << num(c_nls(0.5 * a1, coeffs, ctx.config.params)) << '\n';
    }
    out.close();
}

std::vector<BifurcationBranch> run_branch(Context& ctx) {
    std::vector<BifurcationBranch> out;
    ctx.meta["branches"] = json::array();
    for (IceModel model : ctx.config.models) {
        BifurcationBranch branch = compute_branch(ctx, model);
        write_branch_csv(ctx.path("branch_" + model_tag(model) + ".csv"), branch);
        write_nls_overlay(ctx, branch);
        ctx.meta["branches"].push_back(branch_json(branch));
        ctx.log << to_string(model) << ": " << branch.points.size() << " points up to a1 = "
                << branch.points.back().wave.profile.coefficient(1) << '\n';
        out.push_back(std::move(branch));
    }
    return out;
}

std::vector<std::size_t> selected_points(const RunConfig& c, const BifurcationBranch& branch) {
    std::vector<std::size_t> out;
    if (c.stability_a1.empty()) {
        out.push_back(branch.points.size() - 1);
        return out;
    }
    for (double target : c.stability_a1) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < branch.points.size(); ++i) {
            const double d = std::abs(branch.points[i].wave.profile.coefficient(1) - target);
            if (d < std::abs(branch.points[best].wave.profile.coefficient(1) - target)) best = i;
        }
        out.push_back(best);
    }
    return out;
}

std::vector<double> sweep_grid(const RunConfig& c) {
    std::vector<double> mu = uniform_floquet_grid(c.mu_count);
    if (c.refine) {
        const double speed = bifurcation_speed(c.params);
        mu = refine_near_collisions(std::move(mu), find_collisions(c.params, speed));
    }
    return mu;
}

json report_json(const InstabilityReport& r) {
    json clusters = json::array();
    for (const auto& cl : r.clusters) {
        clusters.push_back({{"kind", to_string(cl.kind)},
                            {"mu_min", cl.mu_min},
                            {"mu_max", cl.mu_max},
                            {"centroid", {cl.centroid.real(), cl.centroid.imag()}},
                            {"max_growth", cl.max_growth},
                            {"size", cl.size}});
    }
    return {{"max_growth", r.max_growth},
            {"argmax_mu", r.argmax_mu},
            {"argmax_lambda", {r.argmax_lambda.real(), r.argmax_lambda.imag()}},
            {"clusters", clusters}};
}

void run_stability(Context& ctx, bool compare) {
    const RunConfig& c = ctx.config;
    const std::vector<BifurcationBranch> branches = run_branch(ctx);
    const std::vector<double> mu = sweep_grid(c);
    ctx.meta["spectra"] = json::array();
    SweepOptions options;
    options.truncation.half_width = c.hill_modes;
    options.threads = c.threads;
    for (const auto& branch : branches) {
        const auto picks = selected_points(c, branch);
        for (std::size_t n = 0; n < picks.size(); ++n) {
            const TravelingWave& wave = branch.points[picks[n]].wave;
            const FloquetSpectrum spectrum = sweep_floquet(wave, mu, options);
            const InstabilityReport report = classify(spectrum);
            const std::string stem = model_tag(branch.model) + "_" + std::to_string(n);
            write_spectrum_csv(ctx.path("spectrum_" + stem + ".csv"), spectrum);
            json entry = {{"model", to_string(branch.model)},
                          {"a1", wave.profile.coefficient(1)},
                          {"c", wave.c},
                          {"mu_points", mu.size()},
                          {"failed_mu", spectrum.failed_mu},
                          {"report", report_json(report)}};
            ctx.log << to_string(branch.model) << " a1 = " << wave.profile.coefficient(1)
                    << ": max Re(lambda) = " << report.max_growth << '\n';
            if (compare) {
                OutputFile out(ctx.path("compare_" + stem + ".csv"));
                out.stream() << "source,mu,re,im\n";
                for (std::size_t i = 0; i < spectrum.mu_values.size(); ++i) {
                    for (const auto& l : spectrum.eigenvalues[i]) {
                        out.stream() << "ffh," << num(spectrum.mu_values[i]) << ',' << num(l.real()) << ','
                                     << num(l.imag()) << '\n';
                    }
                }
                if (c.params.h.is_infinite()) {
                    try {
                        const auto coeffs = nls_coefficients(branch.model, 1, c.params);
                        const double a = 0.5 * wave.profile.coefficient(1);
                        for (const auto& p : nls_overlay(coeffs, a, wave.c, mu, c.overlay_sign)) {
                            out.stream() << "nls," << num(p.mu) << ',' << num(p.re) << ',' << num(p.im) << '\n';
                            out.stream() << "nls," << num(p.mu) << ',' << num(-p.re) << ',' << num(p.im) << '\n';
                        }
                    } catch (const WiltonPole&) {
                        entry["overlay"] = "skipped at the resonant pole";
                    }
                }
                out.close();
            }
            ctx.meta["spectra"].push_back(entry);
            if (!spectrum.failed_mu.empty()) {
                throw EigSolverFailure(std::to_string(spectrum.failed_mu.size()) +
                                       " Floquet exponents failed; the rest were written");
            }
        }
    }
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    out << j.dump(2) << '\n';
}

}  // namespace

const char* to_string(Command command) {
    switch (command) {
        case Command::Dispersion: return "dispersion";
        case Command::Nls: return "nls";
        case Command::Resonance: return "resonance";
        case Command::Collisions: return "collisions";
        case Command::Branch: return "branch";
        case Command::Stability: return "stability";
        case Command::Compare: return "compare";
    }
    return "?";
}

Command parse_command(const std::string& text) {
    for (Command c : {Command::Dispersion, Command::Nls, Command::Resonance, Command::Collisions,
                      Command::Branch, Command::Stability, Command::Compare}) {
        if (text == to_string(c)) return c;
    }
    throw ConfigError("unknown command '" + text + "'");
}

void RunConfig::validate() const {
    try {
        params.validate();
        solver.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (models.empty()) throw ConfigError("at least one ice model is required");
    if (!(a1_max > 0.0)) throw ConfigError("a1_max must be positive");
    if (!(k_min > 0.0) || k_max < k_min || k_count < 1) throw ConfigError("invalid k range");
    if (D_count < 1 || D_max < D_min || D_min < 0.0) throw ConfigError("invalid D range");
    for (double D : D_list) {
        if (!(D >= 0.0)) throw ConfigError("D values must be nonnegative");
    }
    for (int K : K_list) {
        if (K < 2) throw ConfigError("resonant modes must be at least 2");
    }
    if (collision_modes < 1) throw ConfigError("collision_modes must be positive");
    if (mu_count < 2) throw ConfigError("mu_count must be at least 2");
    if (hill_modes < 1) throw ConfigError("hill_modes must be positive");
    if (threads < 0) throw ConfigError("threads must be nonnegative");
}

std::map<std::string, std::string> read_key_values(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::map<std::string, std::string> out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(number) + ": expected key = value");
        }
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
    SolverConfig& s = c.solver;
    if (key == "command") {
        c.command = parse_command(value);
    } else if (key == "g") {
        c.params.g = parse_double(key, value);
    } else if (key == "h") {
        try {
            c.params.h = Depth::parse(value);
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
    } else if (key == "D") {
        c.params.D = parse_double(key, value);
    } else if (key == "model") {
        if (value == "both") {
            c.models = {IceModel::LinearBiharmonic, IceModel::NonlinearCosserat};
        } else {
            try {
                c.models = {parse_ice_model(value)};
            } catch (const Error& e) {
                throw ConfigError(e.what());
            }
        }
    } else if (key == "a1_max") {
        c.a1_max = parse_double(key, value);
    } else if (key == "modes") {
        s.initial_modes = static_cast<std::size_t>(std::max(1L, parse_long(key, value)));
    } else if (key == "max_modes") {
        s.max_modes = static_cast<std::size_t>(std::max(1L, parse_long(key, value)));
    } else if (key == "residual_tol") {
        s.residual_tol = parse_double(key, value);
    } else if (key == "max_newton_iters") {
        s.max_newton_iters = static_cast<int>(parse_long(key, value));
    } else if (key == "jacobian_step") {
        s.jacobian_step = parse_double(key, value);
    } else if (key == "tail_threshold") {
        s.tail_threshold = parse_double(key, value);
    } else if (key == "amplitude_step") {
        s.amplitude_step = parse_double(key, value);
    } else if (key == "min_amplitude_step") {
        s.min_amplitude_step = parse_double(key, value);
    } else if (key == "grid_oversample") {
        s.grid_oversample = static_cast<std::size_t>(std::max(1L, parse_long(key, value)));
    } else if (key == "out") {
        c.output_dir = value;
    } else if (key == "resume") {
        c.resume = value;
    } else if (key == "k_min") {
        c.k_min = parse_double(key, value);
    } else if (key == "k_max") {
        c.k_max = parse_double(key, value);
    } else if (key == "k_count") {
        c.k_count = static_cast<int>(parse_long(key, value));
    } else if (key == "D_list") {
        c.D_list.clear();
        for (const auto& item : split_list(value)) c.D_list.push_back(parse_double(key, item));
    } else if (key == "D_min") {
        c.D_min = parse_double(key, value);
    } else if (key == "D_max") {
        c.D_max = parse_double(key, value);
    } else if (key == "D_count") {
        c.D_count = static_cast<int>(parse_long(key, value));
    } else if (key == "K") {
        c.K_list.clear();
        for (const auto& item : split_list(value)) c.K_list.push_back(static_cast<int>(parse_long(key, item)));
    } else if (key == "speed") {
        if (value == "bifurcation" || value.empty()) {
            c.speed.reset();
        } else {
            c.speed = parse_double(key, value);
        }
    } else if (key == "collision_modes") {
        c.collision_modes = static_cast<int>(parse_long(key, value));
    } else if (key == "mu_count") {
        c.mu_count = static_cast<int>(parse_long(key, value));
    } else if (key == "refine") {
        c.refine = parse_bool(key, value);
    } else if (key == "hill_modes") {
        c.hill_modes = static_cast<int>(parse_long(key, value));
    } else if (key == "stability_a1") {
        c.stability_a1.clear();
        for (const auto& item : split_list(value)) c.stability_a1.push_back(parse_double(key, item));
    } else if (key == "overlay_sign") {
        if (value == "group-minus-speed") {
            c.overlay_sign = OverlaySign::GroupMinusSpeed;
        } else if (value == "speed-minus-group") {
            c.overlay_sign = OverlaySign::SpeedMinusGroup;
        } else {
            throw ConfigError("overlay_sign must be group-minus-speed or speed-minus-group");
        }
    } else if (key == "threads") {
        c.threads = static_cast<int>(parse_long(key, value));
    } else {
        throw ConfigError("unknown setting '" + key + "'");
    }
}

void write_branch_csv(const fs::path& path, const BifurcationBranch& branch) {
    std::size_t width = 0;
    for (const auto& p : branch.points) width = std::max(width, p.wave.profile.modes());
    OutputFile out(path);
    out.stream() << 'c';
    for (std::size_t j = 1; j <= width; ++j) out.stream() << ",a" << j;
    out.stream() << '\n';
    for (const auto& p : branch.points) {
        out.stream() << num(p.wave.c);
        for (std::size_t j = 1; j <= width; ++j) out.stream() << ',' << num(p.wave.profile.coefficient(j));
        out.stream() << '\n';
    }
    out.close();
}

BifurcationBranch read_branch_csv(const fs::path& path, const PhysicalParams& params, IceModel model) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read branch file " + path.string());
    std::string line;
    if (!std::getline(in, line) || trim(line).rfind("c", 0) != 0) {
        throw FormatError(path.string() + ": missing header row");
    }
    const std::size_t width = split_list(line).size() - 1;
    BifurcationBranch branch{params, model, {}};
    int number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (trim(line).empty()) continue;
        const auto fields = split_list(line);
        if (fields.size() != width + 1) {
            throw FormatError(path.string() + ":" + std::to_string(number) + ": expected " +
                              std::to_string(width + 1) + " fields");
        }
        std::vector<double> values;
        for (const auto& f : fields) {
            try {
                values.push_back(parse_double("branch", f));
            } catch (const ConfigError&) {
                throw FormatError(path.string() + ":" + std::to_string(number) + ": bad number '" + f + "'");
            }
        }
        std::vector<double> coeffs(values.begin() + 1, values.end());
        while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
        BranchPoint point;
        point.wave = TravelingWave{SpectralProfile(std::move(coeffs)), values[0], params, model};
        branch.points.push_back(std::move(point));
    }
    if (branch.points.empty()) throw FormatError(path.string() + ": no branch rows");
    return branch;
}

void write_spectrum_csv(const fs::path& path, const FloquetSpectrum& spectrum) {
    OutputFile out(path);
    out.stream() << "mu,re_lambda,im_lambda\n";
    for (std::size_t i = 0; i < spectrum.mu_values.size(); ++i) {
        for (const auto& l : spectrum.eigenvalues[i]) {
            out.stream() << num(spectrum.mu_values[i]) << ',' << num(l.real()) << ',' << num(l.imag()) << '\n';
        }
    }
    out.close();
}

int run(const RunConfig& config, std::ostream& log) {
    Context ctx{config, log, json::object(), {}};
    json record = {{"version", kVersion}, {"config", config_json(config)}};
    int status = 0;
    try {
        config.validate();
        std::error_code ec;
        fs::create_directories(config.output_dir, ec);
        if (ec || !fs::is_directory(config.output_dir)) {
            throw ConfigError("output directory " + config.output_dir.string() + " is not writable");
        }
        switch (config.command) {
            case Command::Dispersion: run_dispersion(ctx); break;
            case Command::Nls: run_nls(ctx); break;
            case Command::Resonance: run_resonance(ctx); break;
            case Command::Collisions: run_collisions(ctx); break;
            case Command::Branch: run_branch(ctx); break;
            case Command::Stability: run_stability(ctx, false); break;
            case Command::Compare: run_stability(ctx, true); break;
        }
    } catch (const Error& e) {
        status = (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const FormatError*>(&e)) ? 2 : 3;
        record["error"] = {{"kind", e.kind()}, {"message", e.what()}};
        log << "error [" << e.kind() << "]: " << e.what() << '\n';
    }
    record["files"] = ctx.files;
    record["results"] = ctx.meta;
    record["status"] = status;
    if (fs::is_directory(config.output_dir)) {
        const std::string sidecar = std::string(to_string(config.command)) + ".json";
        write_json(config.output_dir / sidecar, record);
        if (status != 0) write_json(config.output_dir / "error.json", record["error"]);
    }
    return status;
}

}  // namespace flexwave
