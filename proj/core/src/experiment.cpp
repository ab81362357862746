#include "ppife/experiment.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ppife {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& s) {
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw Error("bad boolean value: " + s);
}

double parse_double(const std::string& s) {
  size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw Error("bad number: " + s);
  return v;
}

int parse_int(const std::string& s) {
  size_t pos = 0;
  const int v = std::stoi(s, &pos);
  if (pos != s.size()) throw Error("bad integer: " + s);
  return v;
}

Problem resolve_problem(const RunConfig& cfg) {
  if (cfg.example == "example1")
    return make_disk_problem(cfg.beta_plus, cfg.beta_minus);
  if (cfg.example == "example2") return make_petal_problem();
  if (cfg.example == "custom")
    return make_disk_problem(cfg.beta_plus, cfg.beta_minus, cfg.r0,
                             Vec2{cfg.center_x, cfg.center_y});
  throw Error("unknown example id: " + cfg.example);
}

void write_field_csv(const std::string& path, const Problem& p,
                     const DiscreteSolution& sol) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open output file: " + path);
  os << "x,y,u_h,u_exact,error\n";
  const Rect dom = sol.mesh->domain;
  const int ns = 64;
  char buf[160];
  for (int j = 0; j < ns; ++j) {
    for (int i = 0; i < ns; ++i) {
      const Vec2 x{dom.lo.x + dom.width() * (i + 0.5) / ns,
                   dom.lo.y + dom.height() * (j + 0.5) / ns};
      const double uh = sol.eval(x);
      const double ue = p.exact.value(x, p.side_at(x));
      std::snprintf(buf, sizeof(buf), "%.6E,%.6E,%.9E,%.9E,%.3E\n", x.x, x.y,
                    uh, ue, uh - ue);
      os << buf;
    }
  }
}

}  // namespace

std::vector<int> parse_ladder(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(item, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != item.size()) throw Error("bad integer in list: " + item);
    out.push_back(v);
  }
  return out;
}

RunConfig load_config(std::istream& is) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("config line " + std::to_string(lineno) +
                  " is not key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "example")
      cfg.example = val;
    else if (key == "beta_plus")
      cfg.beta_plus = parse_double(val);
    else if (key == "beta_minus")
      cfg.beta_minus = parse_double(val);
    else if (key == "r0")
      cfg.r0 = parse_double(val);
    else if (key == "center_x")
      cfg.center_x = parse_double(val);
    else if (key == "center_y")
      cfg.center_y = parse_double(val);
    else if (key == "n_ladder")
      cfg.n_ladder = parse_ladder(val);
    else if (key == "quad_order_stiffness")
      cfg.quad_order_stiffness = parse_int(val);
    else if (key == "quad_order_variable")
      cfg.quad_order_variable = parse_int(val);
    else if (key == "quad_order_load")
      cfg.quad_order_load = parse_int(val);
    else if (key == "quad_order_errors")
      cfg.quad_order_errors = parse_int(val);
    else if (key == "solver_tol")
      cfg.solver_tol = parse_double(val);
    else if (key == "out_dir")
      cfg.out_dir = val;
    else if (key == "write_fields")
      cfg.write_fields = parse_bool(val);
    else if (key == "with_properties")
      cfg.with_properties = parse_bool(val);
    else if (key == "allow_large_n")
      cfg.allow_large_n = parse_bool(val);
    else if (key == "seed")
      cfg.seed = static_cast<unsigned>(parse_int(val));
    else
      throw Error("unknown config key: " + key);
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open config file: " + path);
  return load_config(is);
}

void validate(const RunConfig& cfg) {
  if (cfg.example != "example1" && cfg.example != "example2" &&
      cfg.example != "custom")
    throw Error("unknown example id: " + cfg.example);
  if (!(cfg.beta_plus > 0.0) || !(cfg.beta_minus > 0.0))
    throw Error("coefficients must be positive");
  if (cfg.example == "custom" && !(cfg.r0 > 0.0))
    throw Error("custom interface radius must be positive");
  if (cfg.n_ladder.empty()) throw Error("empty refinement ladder");
  int prev = 0;
  for (const int n : cfg.n_ladder) {
    if (n < 2 || (n & (n - 1)) != 0)
      throw Error("ladder level " + std::to_string(n) +
                  " is not a power of two (>= 2)");
    if (n <= prev) throw Error("ladder levels must be strictly increasing");
    prev = n;
    if (n > 256 && !cfg.allow_large_n)
      throw Error("ladder level " + std::to_string(n) +
                  " exceeds 256; set allow_large_n to permit it");
    if (n > 256)
      std::cerr << "warning: ladder level N=" << n
                << " is beyond the desk-scale default, expect a long runtime\n";
  }
  if (!(cfg.solver_tol > 0.0)) throw Error("solver tolerance must be positive");
}

RunOutput run_experiment(const RunConfig& cfg) {
  validate(cfg);
  const Problem p = resolve_problem(cfg);
  AssemblyOptions opts;
  opts.quad_order_stiffness = cfg.quad_order_stiffness;
  opts.quad_order_variable = cfg.quad_order_variable;
  opts.quad_order_load = cfg.quad_order_load;
  SolveOptions sopts;
  sopts.tol = cfg.solver_tol;

  std::filesystem::create_directories(cfg.out_dir);
  RunOutput out;
  for (const int n : cfg.n_ladder) {
    try {
      const TriMesh mesh = build_cartesian_mesh(p.geom.domain, n);
      const MeshClassification cls = classify_mesh(mesh, p.geom);
      const BasisCache bases = build_bases(mesh, cls, p.beta);
      const LinearSystem sys =
          assemble(mesh, cls, bases, p.beta, p.f, p.g, opts);
      const DiscreteSolution sol = solve(sys, mesh, cls, bases, sopts);
      ErrorReport rep =
          compute_errors(sol, p.exact, p.beta, cfg.quad_order_errors);
      rep.N = n;
      rep.h = mesh.h;
      out.reports.push_back(rep);
      if (cfg.write_fields)
        write_field_csv(
            cfg.out_dir + "/run_N" + std::to_string(n) + ".csv", p, sol);
    } catch (const Error& e) {
      out.complete = false;
      out.stop_reason = e.what();
      break;
    }
  }

  if (out.reports.size() >= 2) {
    out.rates = fit_rates(out.reports);
  } else {
    for (const auto& rep : out.reports) {
      RateRow row;
      row.N = rep.N;
      row.h = rep.h;
      row.l2_error = rep.l2_error;
      row.h1_error = rep.h1_error;
      out.rates.rows.push_back(row);
    }
  }
  std::ofstream os(cfg.out_dir + "/rates.csv");
  if (!os) throw Error("cannot open output file: " + cfg.out_dir + "/rates.csv");
  write_rates_csv(out.rates, os);
  return out;
}

std::vector<PropertyResult> run_properties(const RunConfig& cfg) {
  VerifyConfig vc;
  vc.seed = cfg.seed;
  const std::vector<PropertyResult> results = run_all_properties(vc);
  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream os(cfg.out_dir + "/properties.txt");
  if (!os)
    throw Error("cannot open output file: " + cfg.out_dir + "/properties.txt");
  write_property_report(results, os);
  return results;
}

}  // namespace ppife
