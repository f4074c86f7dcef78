#include "coassoc/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace coassoc {

void RunConfig::validate() const {
  if (lambda < 0.0) throw ConfigError("lambda must be nonnegative");
  for (const auto& [k, v] : tol)
    if (v <= 0.0) throw ConfigError("tolerance " + k + " must be positive");
  if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "lambda")
      cfg.lambda = std::stod(val);
    else if (key == "seed")
      cfg.seed = std::stoull(val);
    else if (key == "out")
      cfg.out = val;
    else if (key == "format")
      cfg.format = val;
    else if (key.rfind("tol.", 0) == 0) {
      const std::string name = key.substr(4);
      if (!cfg.tol.count(name)) throw ConfigError("unknown tolerance: " + name);
      cfg.tol[name] = std::stod(val);
    } else {
      throw ConfigError("unknown config key: " + key);
    }
  }
  cfg.validate();
}

RunConfig load_config_env() {
  RunConfig cfg;
  if (const char* p = std::getenv("COASSOC_CONFIG")) apply_config_file(cfg, p);
  return cfg;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const CurveFile& f) {
  std::ofstream out(f.path);
  if (!out) throw ConfigError("cannot write " + f.path);
  out << f.header_meta << "\n";
  out << "# columns=";
  for (size_t i = 0; i < f.columns.size(); ++i) out << (i ? "," : "") << f.columns[i];
  out << "\n";
  for (const auto& row : f.rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt17(row[i]);
    out << "\n";
  }
}

CurveFile read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  CurveFile f;
  f.path = path;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# columns=", 0) == 0) {
        std::stringstream ss(line.substr(10));
        std::string tok;
        while (std::getline(ss, tok, ',')) f.columns.push_back(tok);
      } else if (f.header_meta.empty()) {
        f.header_meta = line;
      }
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
    f.rows.push_back(std::move(row));
  }
  return f;
}

namespace {

std::map<std::string, std::string> parse_meta(const std::string& meta) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(meta.substr(meta.find('#') + 1));
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos) kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

}  // namespace

double roundtrip_residual(const CurveFile& f) {
  const auto meta = parse_meta(f.header_meta);
  if (!meta.count("case") || !meta.count("lambda"))
    throw ConfigError("roundtrip: header lacks case/lambda metadata");
  const SymCase cse = case_from_name(meta.at("case"));
  const double lambda = std::stod(meta.at("lambda"));

  double worst = 0.0;
  for (const auto& row : f.rows) {
    // column 0 is the curve parameter
    switch (cse) {
      case SymCase::SO3xSO2: {
        const double x1 = row.at(1), a1 = row.at(2);
        const double C = std::stod(meta.at("C"));
        if (a1 == 0.0) break;  // zero-section stratum
        worst = std::max(worst,
                         std::abs(G_eval(a1, std::max(kTraceX1Eps, x1), lambda) - C));
        break;
      }
      case SymCase::SU2: {
        const double r = row.at(1), x5 = row.at(2);
        const double C = std::stod(meta.at("C"));
        worst = std::max(worst, std::abs(F_eval(r, x5, lambda) - C));
        break;
      }
      case SymCase::SO3Std: {
        const double x1 = row.at(1), x4 = row.at(2), x5 = row.at(3), a1 = row.at(4),
                     a2 = row.at(5);
        const double L = lambda + a1 * a1 + a2 * a2;
        worst = std::max(worst, std::abs(std::pow(x4, 4) * L - std::stod(meta.at("C"))));
        worst = std::max(worst, std::abs(std::pow(x5, 4) * L - std::stod(meta.at("D"))));
        worst = std::max(worst, std::abs(a1 * x1 - std::stod(meta.at("E"))));
        break;
      }
      case SymCase::SO3Irr: {
        // trajectories re-validate against the velocity relations: recompute
        // the kernel residual at the sampled state
        PathState s;
        s.cse = cse;
        s.q = Eigen::Map<const Eigen::VectorXd>(row.data() + 1,
                                                static_cast<Eigen::Index>(row.size()) - 1);
        const G2Params params{lambda, false};
        try {
          const Eigen::VectorXd v = ode_rhs(s, params);
          const Eigen::MatrixXd A = velocity_relations(s, params);
          worst = std::max(worst, (A * v).cwiseAbs().maxCoeff());
        } catch (const SingularLocusError&) {
        }
        break;
      }
      default:
        throw ConfigError("roundtrip: unsupported case " + case_name(cse));
    }
  }
  return worst;
}

CurveFile curve_to_file(const LevelCurve& lc, double lambda, const std::string& path) {
  CurveFile f;
  f.path = path;
  std::string meta = "# case=" + case_name(lc.cse) + " lambda=" + fmt17(lambda);
  const char* names3[3] = {"C", "D", "E"};
  for (size_t i = 0; i < lc.constants.size(); ++i)
    meta += std::string(" ") + names3[i] + "=" + fmt17(lc.constants[i]);
  meta += " stratum=" + lc.stratum;
  f.header_meta = meta;
  f.columns = {"t"};
  if (lc.cse == SymCase::SU2) {
    // emitted in the paper's (r, x5) order
    f.columns.push_back("r");
    f.columns.push_back("x5");
  } else {
    for (const auto& n : state_names(lc.cse)) f.columns.push_back(n);
  }
  double t = 0.0;
  for (size_t i = 0; i < lc.samples.size(); ++i) {
    const auto& q = lc.samples[i];
    if (i > 0) t += (q - lc.samples[i - 1]).norm();
    std::vector<double> row{t};
    if (lc.cse == SymCase::SU2) {
      row.push_back(q(1));
      row.push_back(q(0));
    } else {
      for (Eigen::Index j = 0; j < q.size(); ++j) row.push_back(q(j));
    }
    f.rows.push_back(std::move(row));
  }
  return f;
}

}  // namespace coassoc
