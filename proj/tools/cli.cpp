#include "cli.hpp"

#include <lrmap/continuous.hpp>
#include <lrmap/digest.hpp>
#include <lrmap/dmd.hpp>
#include <lrmap/errors.hpp>
#include <lrmap/kernel.hpp>
#include <lrmap/linalg.hpp>
#include <lrmap/oracle.hpp>
#include <lrmap/solver.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>
#include <vector>

namespace lrmap::cli {
namespace {

constexpr const char* kVersion = "0.1.0";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp);
    out << content;
    if (!out.flush()) throw ConfigError("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw ConfigError("cannot move " + tmp + " into place");
  }
}

SchattenP parse_p(const std::string& text) {
  if (text == "inf") return SchattenP::spectral();
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || !std::isfinite(v) || v <= 0.0) {
    throw ConfigError("-p expects a positive real or \"inf\", got \"" + text +
                      "\"");
  }
  return SchattenP(v);
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string p_json(SchattenP p) {
  return p.is_spectral() ? std::string("\"inf\"") : format_double(p.value());
}

std::string p_label(double key) {
  return std::isinf(key) ? std::string("inf") : format_double(key);
}

// Difference between the last retained and the first discarded singular
// value of the projected target; 0 for k = 0 or past the spectrum.
double spectral_gap(const Vector& sigma, int k) {
  auto at = [&sigma](int i) {
    return i < sigma.size() ? sigma(i) : 0.0;
  };
  if (k <= 0) return 0.0;
  return at(k - 1) - at(k);
}

struct ReportData {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;   // role -> path
  std::vector<std::pair<std::string, std::string>> digests;  // role -> hex
  int k = 0;
  SchattenP p;
  int rank_x = 0;
  Vector z_sigma;
  double achieved_error = 0.0;
  double predicted_error = 0.0;
  double gap = 0.0;
  bool has_oracle = false;
  OracleReport oracle;
  std::uint64_t seed = 0;
  ToleranceConfig tol;
};

std::string render_report(const ReportData& r) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"command\": \"" << json_escape(r.command) << "\",\n";

  out << "  \"inputs\": {";
  for (std::size_t i = 0; i < r.inputs.size(); ++i) {
    if (i) out << ", ";
    out << "\"" << json_escape(r.inputs[i].first) << "\": \""
        << json_escape(r.inputs[i].second) << "\"";
  }
  out << "},\n";

  out << "  \"digests\": {";
  for (std::size_t i = 0; i < r.digests.size(); ++i) {
    if (i) out << ", ";
    out << "\"" << json_escape(r.digests[i].first) << "\": \""
        << r.digests[i].second << "\"";
  }
  out << "},\n";

  out << "  \"k\": " << r.k << ",\n";
  out << "  \"p\": " << p_json(r.p) << ",\n";
  out << "  \"rank_x\": " << r.rank_x << ",\n";

  out << "  \"z_sigma\": [";
  for (Eigen::Index i = 0; i < r.z_sigma.size(); ++i) {
    if (i) out << ", ";
    out << format_double(r.z_sigma(i));
  }
  out << "],\n";

  out << "  \"achieved_error\": " << format_double(r.achieved_error) << ",\n";
  out << "  \"predicted_error\": " << format_double(r.predicted_error)
      << ",\n";
  out << "  \"spectral_gap\": " << format_double(r.gap) << ",\n";

  if (r.has_oracle) {
    const OracleReport& o = r.oracle;
    out << "  \"oracle\": {\n";
    out << "    \"closed_form_error\": " << format_double(o.closed_form_error)
        << ",\n";
    out << "    \"best_candidate_error\": "
        << format_double(o.best_candidate_error) << ",\n";
    out << "    \"n_candidates\": " << o.n_candidates << ",\n";
    out << "    \"n_refinements\": " << o.n_refinements << ",\n";
    out << "    \"margin\": " << format_double(o.margin) << ",\n";
    out << "    \"per_p_formula_gap\": {";
    bool first = true;
    for (const auto& [key, gap] : o.per_p_formula_gap) {
      if (!first) out << ", ";
      first = false;
      out << "\"" << p_label(key) << "\": " << format_double(gap);
    }
    out << "},\n";
    out << "    \"rng_seed\": " << o.rng_seed << ",\n";
    out << "    \"instance_digest\": \""
        << Digest().u64(o.instance_digest).hex() << "\"\n";
    out << "  },\n";
  } else {
    out << "  \"oracle\": null,\n";
  }

  out << "  \"seed\": " << r.seed << ",\n";
  out << "  \"tolerances\": {\"rank_rtol\": " << format_double(r.tol.rank_rtol)
      << ", \"psd_atol\": " << format_double(r.tol.psd_atol)
      << ", \"recon_rtol\": " << format_double(r.tol.recon_rtol) << "},\n";
  out << "  \"version\": \"" << kVersion << "\"\n";
  out << "}\n";
  return out.str();
}

std::string digest_hex(const Matrix& m) {
  return Digest().matrix(m).hex();
}

nlohmann::json load_config(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
}

KernelSpec kernel_from_json(const nlohmann::json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "linear") return KernelSpec::linear();
    if (type == "polynomial") {
      return KernelSpec::polynomial(j.at("degree").get<int>(),
                                    j.value("offset", 0.0));
    }
    if (type == "gaussian") {
      return KernelSpec::gaussian(j.at("bandwidth").get<double>());
    }
    throw ConfigError("unknown kernel type \"" + type + "\"");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("kernel config: ") + e.what());
  }
}

// Monomial-coefficient kernel family for 1-D domains: row i of
// "coefficients" gives component i of k(u) as a polynomial in u.
HsKernel hs_kernel_from_json(const nlohmann::json& j) {
  std::vector<std::vector<double>> rows;
  try {
    rows = j.at("coefficients").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("continuous kernel config: ") + e.what());
  }
  if (rows.empty() || rows[0].empty()) {
    throw ConfigError("continuous kernel needs a nonempty coefficient matrix");
  }
  Matrix coeff(static_cast<Eigen::Index>(rows.size()),
               static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) {
      throw ConfigError("coefficient rows must have equal length");
    }
    for (std::size_t c = 0; c < rows[i].size(); ++c) {
      coeff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          rows[i][c];
    }
  }
  HsKernel kernel;
  kernel.output_dim = static_cast<int>(coeff.rows());
  kernel.eval = [coeff](const Vector& u) -> Vector {
    Vector mono(coeff.cols());
    mono(0) = 1.0;
    for (Eigen::Index i = 1; i < mono.size(); ++i) {
      mono(i) = mono(i - 1) * u(0);
    }
    return coeff * mono;
  };
  return kernel;
}

std::string sweep_csv_path(const std::string& out) {
  const std::string suffix = ".json";
  if (out.size() > suffix.size() &&
      out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return out.substr(0, out.size() - suffix.size()) + ".sweep.csv";
  }
  return out + ".sweep.csv";
}

const std::string& require(const std::string& value, const char* flag) {
  if (value.empty()) {
    throw ConfigError(std::string("missing required flag ") + flag);
  }
  return value;
}

int require_k(const RunConfig& c) {
  if (!c.k_set) throw ConfigError("missing required flag -k");
  return c.k;
}

void fill_solution(ReportData& r, const LowRankSolution& sol) {
  r.k = sol.k_requested;
  r.p = sol.p;
  r.rank_x = sol.rank_x;
  r.z_sigma = sol.z_sigma;
  r.achieved_error = sol.achieved_error;
  r.predicted_error = sol.predicted_error;
  r.gap = spectral_gap(sol.z_sigma, sol.k_requested);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

Matrix read_matrix_csv(const std::string& path) {
  const std::string text = read_file(path);

  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) {
    if (cur.back() == '\r') cur.pop_back();
    lines.push_back(cur);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw ParseError("empty matrix file " + path, 1, 1);

  std::vector<std::vector<double>> rows;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int line_no = static_cast<int>(li) + 1;
    std::vector<double> row;
    std::size_t start = 0;
    int col = 1;
    const std::string& line = lines[li];
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string cell = line.substr(
          start, comma == std::string::npos ? std::string::npos
                                            : comma - start);
      const char* begin = cell.c_str();
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      while (end && *end == ' ') ++end;
      if (end == begin || *end != '\0' || !std::isfinite(v)) {
        throw ParseError("cannot parse \"" + cell + "\" at line " +
                             std::to_string(line_no) + ", field " +
                             std::to_string(col),
                         line_no, col);
      }
      row.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
      ++col;
    }
    if (!rows.empty() && row.size() != rows[0].size()) {
      throw RaggedRows("line " + std::to_string(line_no) + " has " +
                           std::to_string(row.size()) + " fields, expected " +
                           std::to_string(rows[0].size()),
                       line_no);
    }
    rows.push_back(std::move(row));
  }

  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return m;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ",";
      out << format_double(m(i, j));
    }
    out << "\n";
  }
  write_text_atomic(path, out.str());
}

int run(const RunConfig& config) {
  ToleranceConfig tol;
  tol.rank_rtol = config.rank_rtol;
  const SchattenP p = parse_p(config.p_text);
  const std::string& out = require(config.out_path, "--out");

  ReportData report;
  report.command = config.command;
  report.seed = config.seed;
  report.tol = tol;
  int exit_code = kOk;

  if (config.command == "solve" || config.command == "verify" ||
      config.command == "sweep") {
    const Matrix x = read_matrix_csv(require(config.x_path, "--x"));
    const Matrix y = read_matrix_csv(require(config.y_path, "--y"));
    report.inputs = {{"x", config.x_path}, {"y", config.y_path}};
    report.digests = {{"x", digest_hex(x)}, {"y", digest_hex(y)}};

    if (config.command == "sweep") {
      if (config.kmax < 0) throw ConfigError("sweep needs --kmax >= 0");
      std::ostringstream csv;
      csv << "k,achieved_error,predicted_error\n";
      LowRankSolution last;
      for (int k = 0; k <= config.kmax; ++k) {
        LowRankSolution sol = solve_lowrank(x, y, k, p, tol);
        csv << k << "," << format_double(sol.achieved_error) << ","
            << format_double(sol.predicted_error) << "\n";
        if (k == config.kmax) last = std::move(sol);
      }
      write_text_atomic(sweep_csv_path(out), csv.str());
      fill_solution(report, last);
    } else {
      const int k = require_k(config);
      const LowRankSolution sol = solve_lowrank(x, y, k, p, tol);
      fill_solution(report, sol);
      if (config.command == "verify") {
        int n_samples = 200;
        int n_als_starts = 10;
        if (!config.config_path.empty()) {
          const nlohmann::json j = load_config(config.config_path);
          n_samples = j.value("n_samples", n_samples);
          n_als_starts = j.value("n_als_starts", n_als_starts);
          report.inputs.emplace_back("config", config.config_path);
        }
        report.has_oracle = true;
        report.oracle = verify_optimality(x, y, k, p, n_samples, n_als_starts,
                                          config.seed, tol);
        const bool frobenius = !p.is_spectral() && p.value() == 2.0;
        if (frobenius &&
            report.oracle.margin <
                -1e-6 * (1.0 + report.oracle.closed_form_error)) {
          exit_code = kVerifyFail;
        }
      }
    }
  } else if (config.command == "weighted") {
    const Matrix x = read_matrix_csv(require(config.x_path, "--x"));
    const Matrix y = read_matrix_csv(require(config.y_path, "--y"));
    const nlohmann::json j =
        load_config(require(config.config_path, "--config"));
    std::string weight_path;
    try {
      weight_path = j.at("weight").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("weighted config: ") + e.what());
    }
    const Matrix w = read_matrix_csv(weight_path);
    const LowRankSolution sol = solve_weighted(x, y, w, require_k(config), p,
                                               tol);
    report.inputs = {{"x", config.x_path},
                     {"y", config.y_path},
                     {"weight", weight_path},
                     {"config", config.config_path}};
    report.digests = {{"x", digest_hex(x)},
                      {"y", digest_hex(y)},
                      {"weight", digest_hex(w)}};
    fill_solution(report, sol);
  } else if (config.command == "dmd") {
    SnapshotSeries series{read_matrix_csv(require(config.x_path, "--x"))};
    const LowRankSolution sol = lowrank_dmd(series, require_k(config), p, tol);
    report.inputs = {{"series", config.x_path}};
    report.digests = {{"series", digest_hex(series.states)}};
    fill_solution(report, sol);
  } else if (config.command == "kernel-dmd") {
    if (p.is_spectral() || p.value() != 2.0) {
      throw ConfigError("kernel-dmd works in the Hilbert-Schmidt norm; use -p 2");
    }
    const Matrix x = read_matrix_csv(require(config.x_path, "--x"));
    const Matrix y = read_matrix_csv(require(config.y_path, "--y"));
    const nlohmann::json j =
        load_config(require(config.config_path, "--config"));
    const KernelSpec kernel = kernel_from_json(
        j.contains("kernel") ? j.at("kernel") : j);
    const int k = require_k(config);
    const KernelSolution sol = kernel_lowrank_solve(kernel, x, y, k, tol);

    report.inputs = {{"x", config.x_path},
                     {"y", config.y_path},
                     {"config", config.config_path}};
    report.digests = {{"x", digest_hex(x)}, {"y", digest_hex(y)}};
    report.k = k;
    report.p = p;
    report.rank_x = sol.rank_x;
    report.z_sigma = sol.z_sigma;
    report.achieved_error = std::sqrt(sol.achieved_error_sq);
    double retained = 0.0;
    const Eigen::Index kk = std::min<Eigen::Index>(k, sol.z_sigma.size());
    for (Eigen::Index i = 0; i < kk; ++i) {
      retained += sol.z_sigma(i) * sol.z_sigma(i);
    }
    const double total = gram(kernel, y, y).trace();
    report.predicted_error = std::sqrt(std::max(0.0, total - retained));
    report.gap = spectral_gap(sol.z_sigma, k);
  } else if (config.command == "continuous") {
    const nlohmann::json j =
        load_config(require(config.config_path, "--config"));
    HsKernel kx, ky;
    std::string family_name;
    double a = 0.0, b = 1.0;
    int q_start = 2, q_max = 1 << 12;
    double conv_rtol = 1e-10;
    try {
      kx = hs_kernel_from_json(j.at("kernel_x"));
      ky = hs_kernel_from_json(j.at("kernel_y"));
      const nlohmann::json& q = j.at("quadrature");
      family_name = q.value("family", std::string("gauss-legendre"));
      if (q.contains("domain")) {
        a = q.at("domain").at(0).get<double>();
        b = q.at("domain").at(1).get<double>();
      }
      q_start = q.value("q_start", q_start);
      q_max = q.value("q_max", q_max);
      conv_rtol = q.value("conv_rtol", conv_rtol);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("continuous config: ") + e.what());
    }
    RuleFamily family;
    if (family_name == "gauss-legendre") {
      family = [a, b](int q) { return gauss_legendre(q, a, b); };
    } else if (family_name == "trapezoid") {
      family = [a, b](int q) { return composite_trapezoid(q, a, b); };
    } else {
      throw ConfigError("unknown quadrature family \"" + family_name + "\"");
    }
    const int k = require_k(config);
    const RefinementResult res = refine_to_convergence(
        kx, ky, k, p, family, q_start, q_max, conv_rtol, tol);

    const int q_final = res.trace.back().first;
    const QuadratureRule rule = family(q_final);
    report.inputs = {{"config", config.config_path}};
    report.digests = {{"x", digest_hex(discretize_hs(kx, rule))},
                      {"y", digest_hex(discretize_hs(ky, rule))}};
    fill_solution(report, res.solution);
  } else {
    throw ConfigError("unknown command \"" + config.command + "\"");
  }

  write_text_atomic(out, render_report(report));
  return exit_code;
}

int run_and_map_errors(const RunConfig& config) {
  try {
    return run(config);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const RaggedRows& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDimension;
  } catch (const TooFewSnapshots& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDimension;
  } catch (const NotConverged& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const NotPsd& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const NotSymmetric& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const KernelEvalFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace lrmap::cli
