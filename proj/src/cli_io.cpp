#include "choreo/cli_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "choreo/symmetry.hpp"

namespace choreo::cli {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  // Keep a float marker so the value reads back as a double.
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

void write_json(const json& j, std::ostringstream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        out << pad << json(it.key()).dump() << ": ";
        write_json(it.value(), out, indent + 2);
      }
      out << "\n" << close << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); });
      out << (flat ? "[" : "[\n");
      bool first = true;
      for (const auto& e : j) {
        if (!first) out << (flat ? ", " : ",\n");
        first = false;
        if (!flat) out << pad;
        write_json(e, out, indent + 2);
      }
      if (!flat) out << "\n" << close;
      out << "]";
      return;
    }
    case json::value_t::number_float:
      out << format_double(j.get<double>());
      return;
    default:
      out << j.dump();
  }
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json breakdown_json(const ActionBreakdown& b) {
  return json{{"kinetic", b.kinetic}, {"potential", b.potential}, {"total", b.total}};
}

json trace_summary(const SolveResult& r) {
  json stages = json::array();
  for (const auto& s : r.stages) {
    stages.push_back({{"softening", s.softening},
                      {"iterations", s.iterations},
                      {"initial_action", s.initial_action},
                      {"final_action", s.final_action},
                      {"projected_gradient_norm", s.projected_gradient_norm},
                      {"converged", s.converged},
                      {"entry_point", s.entry_point}});
  }
  return json{{"iterations", r.iterations},
              {"accepted_steps", r.trace.empty() ? 0 : r.trace.size() - r.stages.size()},
              {"initial_action", r.trace.empty() ? json(nullptr) : json(r.trace.front())},
              {"final_action", r.trace.empty() ? json(nullptr) : json(r.trace.back())},
              {"projected_gradient_norm", r.projected_gradient_norm},
              {"stages", stages}};
}

json run_json(std::size_t index, const SolveResult& r) {
  return json{{"seed_index", index},
              {"status", to_string(r.status)},
              {"converged", r.converged},
              {"action", r.converged ? json(r.breakdown.total) : json(nullptr)},
              {"iterations", r.iterations},
              {"failure_reason", r.failure_reason}};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string dump_json(const json& doc) {
  std::ostringstream out;
  write_json(doc, out, 0);
  out << "\n";
  return out.str();
}

int threads_from_env() {
  if (const char* env = std::getenv("CHOREO_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min(v, 1024L));
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

json census_json(int n_bodies, bool list, bool hn_only) {
  const auto classes = enumerate_classes(n_bodies);
  json doc{{"n", n_bodies},
           {"formula_count", count_formula(n_bodies)},
           {"burnside_count", count_burnside(n_bodies)},
           {"enumerated_count", classes.size()}};
  std::size_t hn_count = 0;
  json listed = json::array();
  for (const auto& c : classes) {
    const bool admissible = hn_admissible(c.canonical);
    hn_count += admissible;
    if (!list || (hn_only && !admissible)) continue;
    json members = json::array();
    for (const auto& m : c.members) members.push_back(m.to_string());
    listed.push_back({{"canonical", c.canonical.to_string()}, {"members", members}, {"hn_admissible", admissible}});
  }
  doc["hn_admissible_count"] = hn_count;
  if (list) doc["classes"] = listed;
  return doc;
}

json config_to_json(const SolveConfig& cfg) {
  return json{{"n", cfg.n_bodies()},
              {"omega", cfg.omega.to_string()},
              {"symmetry_mode", cfg.symmetry_mode == SymmetryMode::HN ? "HN" : "DN"},
              {"m", cfg.samples_per_unit},
              {"alpha", cfg.alpha},
              {"softening_schedule", cfg.softening_schedule},
              {"initial_step", cfg.initial_step},
              {"armijo_c1", cfg.armijo_c1},
              {"backtrack_ratio", cfg.backtrack_ratio},
              {"tolerance_scale", cfg.tolerance_scale},
              {"max_iterations", cfg.max_iterations},
              {"seed_count", cfg.seed_count},
              {"seed_amplitudes", cfg.seed_amplitudes},
              {"random_seed", cfg.random_seed},
              {"collision_floor", cfg.collision_floor}};
}

SolveConfig config_from_json(const json& doc) {
  try {
    const int n = doc.at("n").get<int>();
    SolveConfig cfg{.omega = SignVector::parse(n, doc.at("omega").get<std::string>())};
    cfg.symmetry_mode = doc.at("symmetry_mode").get<std::string>() == "HN" ? SymmetryMode::HN : SymmetryMode::DN;
    cfg.samples_per_unit = doc.at("m").get<int>();
    cfg.alpha = doc.at("alpha").get<double>();
    cfg.softening_schedule = doc.at("softening_schedule").get<std::vector<double>>();
    cfg.initial_step = doc.at("initial_step").get<double>();
    cfg.armijo_c1 = doc.at("armijo_c1").get<double>();
    cfg.backtrack_ratio = doc.at("backtrack_ratio").get<double>();
    cfg.tolerance_scale = doc.at("tolerance_scale").get<double>();
    cfg.max_iterations = doc.at("max_iterations").get<int>();
    cfg.seed_count = doc.at("seed_count").get<int>();
    cfg.seed_amplitudes = doc.at("seed_amplitudes").get<std::vector<double>>();
    cfg.random_seed = doc.at("random_seed").get<std::uint64_t>();
    cfg.collision_floor = doc.at("collision_floor").get<double>();
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed config: ") + e.what());
  }
}

json report_to_json(const VerificationReport& r) {
  json hn = nullptr;
  if (r.hn_errors) {
    hn = {{"relation", r.hn_errors->relation}, {"parallelogram", optional_number(r.hn_errors->parallelogram)}};
  }
  return json{{"el_residual_max", r.el_residual_max},
              {"min_separation", r.min_separation},
              {"monotone_margin", r.margins.monotone_margin},
              {"velocity_margin", r.margins.velocity_margin},
              {"endpoint_velocity", {r.margins.endpoint_velocity_start, r.margins.endpoint_velocity_end}},
              {"sign_pattern", r.sign_pattern ? json(r.sign_pattern->to_string()) : json(nullptr)},
              {"crossing_counts", r.crossing_counts},
              {"bubble_count", r.bubble_count ? json(*r.bubble_count) : json(nullptr)},
              {"hn_identity_error", hn},
              {"return_error", optional_number(r.return_error)},
              {"radii_dispersion", r.radii_dispersion},
              {"passed", r.passed},
              {"failures", r.failures}};
}

VerifyOptions verify_options(const SolveConfig& cfg) {
  VerifyOptions o;
  o.alpha = cfg.alpha;
  o.expected_omega = cfg.omega;
  o.symmetry_mode = cfg.symmetry_mode;
  o.thresholds.collision_floor = cfg.collision_floor;
  return o;
}

SolveOutcome run_solve(const SolveRequest& request) {
  const SolveConfig& cfg = request.config;
  cfg.validate();
  const MultistartResult ms = multistart(cfg, request.threads);

  json runs = json::array();
  for (std::size_t i = 0; i < ms.runs.size(); ++i) runs.push_back(run_json(i, ms.runs[i]));

  // Without a converged run, report the least-action incumbent.
  std::size_t pick = 0;
  if (ms.best_index) {
    pick = *ms.best_index;
  } else {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ms.runs.size(); ++i) {
      const double a = ms.runs[i].breakdown.total;
      if (std::isfinite(a) && a > 0.0 && a < best) {
        best = a;
        pick = i;
      }
    }
  }
  SolveResult result = ms.runs[pick];
  SolveConfig final_cfg = cfg;
  if (request.refine_to && ms.best_index) {
    result = refine(result, cfg, *request.refine_to);
    final_cfg.samples_per_unit = *request.refine_to;
  }

  json doc{{"config", config_to_json(cfg)},
           {"status", to_string(result.status)},
           {"converged", result.converged},
           {"failure_reason", result.failure_reason},
           {"selected_seed", pick},
           {"refined_m", request.refine_to ? json(*request.refine_to) : json(nullptr)},
           {"action", breakdown_json(result.breakdown)},
           {"path", path_to_json(result.path)},
           {"trace", trace_summary(result)},
           {"runs", runs}};

  bool verified = false;
  if (result.converged) {
    const VerificationReport report = verify(result.path, verify_options(final_cfg));
    doc["verification"] = report_to_json(report);
    verified = report.passed;
    if (!verified && doc["failure_reason"].get<std::string>().empty()) {
      doc["failure_reason"] = "verification failed: " + report.failures.front();
    }
  } else {
    doc["verification"] = nullptr;
  }
  doc["verified"] = verified;
  return SolveOutcome{std::move(doc), verified ? kSuccess : kFailure};
}

std::string trajectory_csv(const FundamentalPath& path) {
  const FullLoop loop = reconstruct(path);
  std::ostringstream out;
  out << "t,body,x,y\n";
  char buf[128];
  for (int k = 0; k < loop.node_count(); ++k) {
    for (int j = 0; j < loop.n_bodies; ++j) {
      const Point z = loop.bodies[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
      std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g,%.17g\n", k * loop.step(), j, z.real(), z.imag());
      out << buf;
    }
  }
  return out.str();
}

SolveOutcome run_verify(const json& result, std::optional<int> m_check) {
  SolveConfig cfg = config_from_json(result.at("config"));
  const FundamentalPath path = path_from_json(result.at("path"));
  cfg.samples_per_unit = path.samples_per_unit;
  const VerificationReport report = verify(path, verify_options(cfg));
  json doc{{"path", {{"n", path.n_bodies}, {"m", path.samples_per_unit}}},
           {"verification", report_to_json(report)}};
  bool ok = report.passed;

  if (m_check) {
    SolveResult base;
    base.path = path;
    const SolveResult fine = refine(base, cfg, *m_check);
    json check{{"m", *m_check}, {"status", to_string(fine.status)}, {"converged", fine.converged}};
    if (fine.converged) {
      SolveConfig fine_cfg = cfg;
      fine_cfg.samples_per_unit = *m_check;
      const VerificationReport fine_report = verify(fine.path, verify_options(fine_cfg));
      const bool same_structure = fine_report.crossing_counts == report.crossing_counts &&
                                  fine_report.bubble_count == report.bubble_count &&
                                  fine_report.sign_pattern == report.sign_pattern;
      const auto coarse_action = try_action(path, PotentialConfig{cfg.alpha});
      check["verification"] = report_to_json(fine_report);
      check["crossing_structure_matches"] = same_structure;
      check["action"] = fine.breakdown.total;
      check["action_change"] = coarse_action ? json(fine.breakdown.total - coarse_action->total) : json(nullptr);
      ok = ok && fine_report.passed && same_structure;
    } else {
      check["failure_reason"] = fine.failure_reason;
      ok = false;
    }
    doc["m_check"] = check;
  }
  doc["passed"] = ok;
  return SolveOutcome{std::move(doc), ok ? kSuccess : kFailure};
}

std::string emit_plot(const json& result) {
  FundamentalPath path;
  std::string omega_text;
  std::string status;
  try {
    path = path_from_json(result.at("path"));
    omega_text = result.at("config").at("omega").get<std::string>();
    status = result.value("status", std::string{});
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed result document: ") + e.what());
  }
  const FullLoop loop = reconstruct(path);
  const auto& z0 = loop.bodies.front();

  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  for (const Point& z : z0) {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
  }
  const double size = 640.0, pad = 40.0;
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
  const double scale = (size - 2 * pad) / span;
  const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
  auto px = [&](double x) { return size / 2 + (x - cx) * scale; };
  auto py = [&](double y) { return size / 2 - (y - cy) * scale; };

  std::ostringstream svg;
  char buf[160];
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" viewBox=\"0 0 640 640\">\n";
  svg << "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf, "<line x1=\"0\" y1=\"%.3f\" x2=\"640\" y2=\"%.3f\" stroke=\"#999\" stroke-width=\"1\"/>\n",
                py(0.0), py(0.0));
  svg << buf;
  svg << "<polygon fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
  for (std::size_t k = 0; k < z0.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%s%.3f,%.3f", k == 0 ? "" : " ", px(z0[k].real()), py(z0[k].imag()));
    svg << buf;
  }
  svg << "\"/>\n";
  for (int j = 0; j < loop.n_bodies; ++j) {
    const Point z = loop.bodies[static_cast<std::size_t>(j)][0];
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"5\" fill=\"#c0392b\"><title>z%d(0)</title></circle>\n",
                  px(z.real()), py(z.imag()), j);
    svg << buf;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"12\" y=\"24\" font-family=\"monospace\" font-size=\"14\">N=%d omega=(%s) M=%d %s</text>\n",
                path.n_bodies, omega_text.c_str(), path.samples_per_unit, status.c_str());
  svg << buf;
  svg << "</svg>\n";
  return svg.str();
}

SolveOutcome run_sweep(const SweepRequest& request) {
  const int n = request.base.n_bodies();
  if (n > kSweepMaxBodies) throw std::invalid_argument("sweep supports N <= " + std::to_string(kSweepMaxBodies));
  std::filesystem::create_directories(request.out_dir);

  json entries = json::array();
  bool all_ok = true;
  for (const auto& cls : enumerate_classes(n)) {
    if (request.hn_only && !hn_admissible(cls.canonical)) continue;
    SolveRequest solve{request.base, std::nullopt, request.threads};
    solve.config.omega = cls.canonical;
    solve.config.symmetry_mode = request.hn_only ? SymmetryMode::HN : SymmetryMode::DN;
    const std::string file = "n" + std::to_string(n) + "_" + cls.canonical.label() + ".json";
    json entry{{"omega", cls.canonical.to_string()}, {"label", cls.canonical.label()}, {"file", file}};
    try {
      SolveOutcome outcome = run_solve(solve);
      write_file(request.out_dir / file, dump_json(outcome.document));
      const json& doc = outcome.document;
      entry["status"] = doc["status"];
      entry["converged"] = doc["converged"];
      entry["verified"] = doc["verified"];
      entry["action"] = doc["converged"].get<bool>() ? doc["action"]["total"] : json(nullptr);
      entry["bubble_count"] = doc["verification"].is_null() ? json(nullptr) : doc["verification"]["bubble_count"];
      entry["failure_reason"] = doc["failure_reason"];
      all_ok = all_ok && outcome.exit_code == kSuccess;
    } catch (const std::exception& e) {
      entry["status"] = "error";
      entry["converged"] = false;
      entry["verified"] = false;
      entry["action"] = nullptr;
      entry["bubble_count"] = nullptr;
      entry["failure_reason"] = e.what();
      all_ok = false;
    }
    entries.push_back(std::move(entry));
  }
  // Least action first; failed classes last, in label order.
  std::stable_sort(entries.begin(), entries.end(), [](const json& a, const json& b) {
    const bool fa = a["action"].is_null(), fb = b["action"].is_null();
    if (fa != fb) return fb;
    if (!fa && a["action"].get<double>() != b["action"].get<double>()) {
      return a["action"].get<double>() < b["action"].get<double>();
    }
    return a["label"].get<std::string>() < b["label"].get<std::string>();
  });
  json index{{"n", n}, {"hn_only", request.hn_only}, {"entries", entries}};
  write_file(request.out_dir / ("index_n" + std::to_string(n) + ".json"), dump_json(index));
  return SolveOutcome{std::move(index), all_ok ? kSuccess : kFailure};
}

}  // namespace choreo::cli
