#include "jacobi/scenario_io.hpp"

#include "jacobi/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace jacobi {

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  throw SchemaError(path + ": " + what);
}

const Json& require(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) schema_fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_fail(path + "." + key, "missing required field");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_fail(path, "expected a finite number");
  return v;
}

int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_fail(path, "expected an integer");
  return j.get<int>();
}

std::string string(const Json& j, const std::string& path) {
  if (!j.is_string()) schema_fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<Matrix> matrices(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array of matrices");
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(matrix_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Json series_to_json(const TrigSeries& s) {
  return {{"c0", s.c0}, {"freq", s.freq}, {"cos", s.cos}, {"sin", s.sin}};
}

TrigSeries series_from_json(const Json& j, const std::string& path) {
  TrigSeries s;
  s.c0 = number(require(j, "c0", path), path + ".c0");
  if (j.contains("freq")) s.freq = number(j["freq"], path + ".freq");
  if (j.contains("cos")) s.cos = numbers(j["cos"], path + ".cos");
  if (j.contains("sin")) s.sin = numbers(j["sin"], path + ".sin");
  return s;
}

Json curvature_payload_json(const CurvatureFamily& family) {
  Json out;
  out["kind"] = to_string(family.kind());
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantCurvature>) {
          out["value"] = matrix_to_json(p.value);
        } else if constexpr (std::is_same_v<T, DiagonalCurvature>) {
          Json entries = Json::array();
          for (const auto& e : p.entries) entries.push_back(series_to_json(e));
          out["entries"] = entries;
        } else if constexpr (std::is_same_v<T, FourierCurvature>) {
          out["freq"] = p.freq;
          out["c0"] = matrix_to_json(p.c0);
          Json c = Json::array(), s = Json::array();
          for (const auto& a : p.cos) c.push_back(matrix_to_json(a));
          for (const auto& a : p.sin) s.push_back(matrix_to_json(a));
          out["cos"] = c;
          out["sin"] = s;
        } else if constexpr (std::is_same_v<T, SampledCurvature>) {
          out["t0"] = p.t0;
          out["dt"] = p.dt;
          Json samples = Json::array();
          for (const auto& a : p.samples) samples.push_back(matrix_to_json(a));
          out["samples"] = samples;
        } else {
          Json parts = Json::array();
          for (const auto& part : p.parts) parts.push_back(curvature_to_json(part));
          out["parts"] = parts;
        }
      },
      family.payload());
  return out;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

Json oracle_to_json(const ScenarioOracle& o) {
  Json j{{"subspace", o.subspace}, {"focal_times", o.focal_times}, {"multiplicities", o.multiplicities}};
  if (o.reduced_curvature) {
    j["reduced_curvature"] = matrix_to_json(*o.reduced_curvature);
    j["reduced_base"] = o.reduced_base;
    j["reduced_lagrangian"] = o.reduced_lagrangian;
    j["reduced_focal_times"] = o.reduced_focal_times;
  }
  return j;
}

ScenarioOracle oracle_from_json(const Json& j, const std::string& path) {
  ScenarioOracle o;
  if (!j.is_object()) schema_fail(path, "expected an object");
  if (j.contains("subspace")) o.subspace = string(j["subspace"], path + ".subspace");
  if (j.contains("focal_times")) o.focal_times = numbers(j["focal_times"], path + ".focal_times");
  if (j.contains("multiplicities")) {
    const Json& mj = j["multiplicities"];
    if (!mj.is_array()) schema_fail(path + ".multiplicities", "expected an array of integers");
    for (std::size_t i = 0; i < mj.size(); ++i)
      o.multiplicities.push_back(integer(mj[i], path + ".multiplicities[" + std::to_string(i) + "]"));
  }
  if (j.contains("reduced_curvature")) {
    o.reduced_curvature = matrix_from_json(j["reduced_curvature"], path + ".reduced_curvature");
    o.reduced_base = string(require(j, "reduced_base", path), path + ".reduced_base");
    if (j.contains("reduced_lagrangian")) o.reduced_lagrangian = string(j["reduced_lagrangian"], path + ".reduced_lagrangian");
    if (j.contains("reduced_focal_times"))
      o.reduced_focal_times = numbers(j["reduced_focal_times"], path + ".reduced_focal_times");
  }
  return o;
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Json matrix_to_json(const Matrix& a) {
  Json rows = Json::array();
  for (int i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array of rows");
  const auto rows = Eigen::Index(j.size());
  Eigen::Index cols = -1;
  Matrix out;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    const Json& row = j[std::size_t(i)];
    if (!row.is_array()) schema_fail(rp, "expected a row array");
    if (cols < 0) {
      cols = Eigen::Index(row.size());
      out.resize(rows, cols);
    } else if (Eigen::Index(row.size()) != cols) {
      schema_fail(rp, "row length " + std::to_string(row.size()) + " differs from " + std::to_string(cols));
    }
    for (Eigen::Index c = 0; c < cols; ++c)
      out(i, c) = number(row[std::size_t(c)], rp + "[" + std::to_string(c) + "]");
  }
  if (rows == 0) out.resize(0, 0);
  return out;
}

Json tolerances_to_json(const Tolerances& t) {
  return {{"sympl", t.sympl}, {"step", t.step}, {"rank", t.rank}, {"iso", t.iso}, {"loc", t.loc}, {"frame", t.frame}};
}

void set_tolerance(Tolerances& tol, const std::string& name, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) throw InvalidArgument("tolerance '" + name + "' must be positive");
  if (name == "sympl") tol.sympl = value;
  else if (name == "step") tol.step = value;
  else if (name == "rank") tol.rank = value;
  else if (name == "iso") tol.iso = value;
  else if (name == "loc") tol.loc = value;
  else if (name == "frame") tol.frame = value;
  else throw InvalidArgument("unknown tolerance '" + name + "' (expected sympl, step, rank, iso, loc, frame)");
}

Tolerances tolerances_from_json(const Json& j, Tolerances base, const std::string& path) {
  if (!j.is_object()) schema_fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string p = path + "." + it.key();
    try {
      set_tolerance(base, it.key(), number(it.value(), p));
    } catch (const InvalidArgument& e) {
      schema_fail(p, e.what());
    }
  }
  return base;
}

Json curvature_to_json(const CurvatureFamily& family) {
  Json out = curvature_payload_json(family);
  if (family.norm_bound_supplied()) out["norm_bound"] = family.norm_bound();
  return out;
}

CurvatureFamily curvature_from_json(const Json& j, Interval domain, const std::string& path) {
  const std::string kind = string(require(j, "kind", path), path + ".kind");
  std::optional<double> bound;
  if (j.contains("norm_bound")) {
    bound = number(j["norm_bound"], path + ".norm_bound");
    if (*bound < 0.0) schema_fail(path + ".norm_bound", "must be non-negative");
  }
  try {
    if (kind == "constant") {
      return CurvatureFamily::constant(matrix_from_json(require(j, "value", path), path + ".value"), domain, bound);
    }
    if (kind == "diagonal") {
      const Json& e = require(j, "entries", path);
      if (!e.is_array()) schema_fail(path + ".entries", "expected an array");
      std::vector<TrigSeries> entries;
      for (std::size_t i = 0; i < e.size(); ++i)
        entries.push_back(series_from_json(e[i], path + ".entries[" + std::to_string(i) + "]"));
      return CurvatureFamily::diagonal(std::move(entries), domain, bound);
    }
    if (kind == "fourier") {
      FourierCurvature f;
      if (j.contains("freq")) f.freq = number(j["freq"], path + ".freq");
      f.c0 = matrix_from_json(require(j, "c0", path), path + ".c0");
      if (j.contains("cos")) f.cos = matrices(j["cos"], path + ".cos");
      if (j.contains("sin")) f.sin = matrices(j["sin"], path + ".sin");
      return CurvatureFamily::fourier(std::move(f), domain, bound);
    }
    if (kind == "sampled") {
      const double t0 = number(require(j, "t0", path), path + ".t0");
      const double dt = number(require(j, "dt", path), path + ".dt");
      std::vector<Matrix> samples = matrices(require(j, "samples", path), path + ".samples");
      const double end = t0 + dt * double(samples.size() - 1);
      const double slack = 1e-9 * std::max(1.0, std::abs(end));
      if (std::abs(t0 - domain.lo) > slack || std::abs(end - domain.hi) > slack)
        schema_fail(path, "sampled grid [t0, t0 + (n-1) dt] does not match the domain");
      return CurvatureFamily::sampled(t0, dt, std::move(samples), bound);
    }
    if (kind == "sum") {
      const Json& p = require(j, "parts", path);
      if (!p.is_array() || p.empty()) schema_fail(path + ".parts", "expected a non-empty array");
      std::vector<CurvatureFamily> parts;
      for (std::size_t i = 0; i < p.size(); ++i)
        parts.push_back(curvature_from_json(p[i], domain, path + ".parts[" + std::to_string(i) + "]"));
      return CurvatureFamily::sum(std::move(parts), domain, bound);
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    schema_fail(path, e.what());
  }
  schema_fail(path + ".kind", "unknown kind '" + kind + "' (expected constant, diagonal, fourier, sampled, sum)");
}

Json scenario_to_json(const Scenario& s) {
  Json j;
  j["version"] = 1;
  j["name"] = s.name;
  j["dim"] = s.family.dim();
  j["domain"] = {s.family.domain().lo, s.family.domain().hi};
  Json curv = curvature_payload_json(s.family);
  j["curvature"] = curv;
  if (s.family.norm_bound_supplied()) j["norm_bound"] = s.family.norm_bound();
  j["tolerances"] = tolerances_to_json(s.tolerances);
  Json subs = Json::array();
  for (const auto& [name, w] : s.subspaces) {
    subs.push_back({{"name", name},
                    {"anchor_t", w.anchor()},
                    {"class", to_string(w.declared_class())},
                    {"frame", matrix_to_json(w.frame())}});
  }
  j["subspaces"] = subs;
  if (s.oracle) j["oracle"] = oracle_to_json(*s.oracle);
  return j;
}

Scenario scenario_from_json(const Json& j) {
  if (!j.is_object()) schema_fail("$", "expected a JSON object");
  const Json& version = require(j, "version", "$");
  if (integer(version, "version") != 1) schema_fail("version", "unsupported version (expected 1)");
  const int m = integer(require(j, "dim", "$"), "dim");
  if (m < 1) schema_fail("dim", "must be a positive integer");
  const std::vector<double> dom = numbers(require(j, "domain", "$"), "domain");
  if (dom.size() != 2 || !(dom[1] > dom[0])) schema_fail("domain", "expected [a, b] with a < b");
  const Interval domain{dom[0], dom[1]};

  Json curv = require(j, "curvature", "$");
  if (j.contains("norm_bound") && !curv.contains("norm_bound")) curv["norm_bound"] = j["norm_bound"];
  CurvatureFamily family = curvature_from_json(curv, domain);
  if (family.dim() != m) schema_fail("curvature", "dimension " + std::to_string(family.dim()) + " differs from dim");

  Tolerances tol;
  if (j.contains("tolerances")) tol = tolerances_from_json(j["tolerances"], tol);

  Scenario s{j.contains("name") ? string(j["name"], "name") : std::string("scenario"), family, {}, {}, tol};
  if (j.contains("subspaces")) {
    const Json& subs = j["subspaces"];
    if (!subs.is_array()) schema_fail("subspaces", "expected an array");
    for (std::size_t i = 0; i < subs.size(); ++i) {
      const std::string p = "subspaces[" + std::to_string(i) + "]";
      const std::string name = string(require(subs[i], "name", p), p + ".name");
      if (s.has_subspace(name)) schema_fail(p + ".name", "duplicate subspace name '" + name + "'");
      const double anchor = number(require(subs[i], "anchor_t", p), p + ".anchor_t");
      if (!domain.contains(anchor)) schema_fail(p + ".anchor_t", "anchor outside the domain");
      SubspaceClass cls;
      try {
        cls = subspace_class_from_string(string(require(subs[i], "class", p), p + ".class"));
      } catch (const InvalidArgument& e) {
        schema_fail(p + ".class", e.what());
      }
      Matrix frame = matrix_from_json(require(subs[i], "frame", p), p + ".frame");
      if (frame.rows() == 0) frame.resize(2 * m, 0);
      if (frame.rows() != 2 * m)
        schema_fail(p + ".frame", "expected " + std::to_string(2 * m) + " rows (2 dim), got " + std::to_string(frame.rows()));
      try {
        s.subspaces.emplace_back(name, JacobiSubspace(anchor, std::move(frame), cls, tol));
      } catch (const Error& e) {
        schema_fail(p + ".frame", e.what());
      }
    }
  }
  if (j.contains("oracle")) {
    s.oracle = oracle_from_json(j["oracle"], "oracle");
    try {
      validate_oracle(s);
    } catch (const Error& e) {
      schema_fail("oracle", e.what());
    }
  }
  return s;
}

Scenario parse_scenario(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << "line " << line << ", column " << col << ": invalid JSON";
    throw SchemaError(os.str());
  }
  return scenario_from_json(j);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const SchemaError& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write scenario file '" + path + "'");
  out << scenario_to_json(s).dump(2) << '\n';
}

std::string content_hash(const Json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return hex64(h);
}

std::string scenario_hash(const Scenario& s) { return content_hash(scenario_to_json(s)); }

Json index_report_to_json(const IndexReport& r) {
  Json events = Json::array();
  for (const auto& e : r.events) {
    events.push_back({{"time", e.time},
                      {"multiplicity", e.multiplicity},
                      {"localization_radius", e.localization_radius},
                      {"kernel_basis", matrix_to_json(e.kernel_basis)}});
  }
  return {{"interval", {r.interval.lo, r.interval.hi}},
          {"events", events},
          {"total", r.total},
          {"focal_at_lo", r.focal_at_lo},
          {"focal_at_hi", r.focal_at_hi},
          {"open_total", r.open_total()}};
}

std::string index_report_csv(const IndexReport& r) {
  std::string out = "time,multiplicity,localization_radius\n";
  for (const auto& e : r.events)
    out += csv_number(e.time) + "," + std::to_string(e.multiplicity) + "," + csv_number(e.localization_radius) + "\n";
  return out;
}

Json maslov_to_json(const MaslovResult& r) {
  Json crossings = Json::array();
  for (const auto& c : r.crossings)
    crossings.push_back({{"time", c.time}, {"intersection_dim", c.intersection_dim}, {"eigenvalues", c.eigenvalues}});
  return {{"index", r.index}, {"crossings", crossings}};
}

Json decomposition_to_json(const DecompositionResult& d) {
  return {{"ind_w", d.ind_w},
          {"ind_quotient", d.ind_quotient},
          {"ind_lambda", d.ind_lambda},
          {"equal", d.equal},
          {"parallelism_residual", d.parallelism_residual}};
}

Scenario transversal_scenario(const TransversalSystem& sys, const std::optional<JacobiSubspace>& quotient,
                              const Tolerances& tol) {
  Scenario s{"transversal", sys.reduced, {}, {}, tol};
  const int n = sys.horizontal_dim();
  if (n > 0) {
    s.set_subspace("Lambda0", JacobiSubspace::vanishing_at(n, sys.reduced.domain().lo));
    if (quotient) s.set_subspace("quotient", *quotient);
  }
  return s;
}

std::string frames_csv(const TransversalSystem& sys) {
  std::ostringstream os;
  os << 't';
  if (!sys.frame.empty())
    for (int i = 0; i < sys.frame[0].rows(); ++i)
      for (int j = 0; j < sys.frame[0].cols(); ++j) os << ",E" << i << '_' << j;
  os << '\n';
  for (std::size_t n = 0; n < sys.times.size(); ++n) {
    os << csv_number(sys.times[n]);
    const Matrix& e = sys.frame[n];
    for (int i = 0; i < e.rows(); ++i)
      for (int j = 0; j < e.cols(); ++j) os << ',' << csv_number(e(i, j));
    os << '\n';
  }
  return os.str();
}

std::string oneill_csv(const TransversalSystem& sys) {
  std::ostringstream os;
  os << 't';
  if (!sys.oneill.empty())
    for (int i = 0; i < sys.oneill[0].rows(); ++i)
      for (int j = 0; j < sys.oneill[0].cols(); ++j) os << ",A" << i << '_' << j;
  os << '\n';
  for (std::size_t n = 0; n < sys.times.size(); ++n) {
    os << csv_number(sys.times[n]);
    const Matrix& a = sys.oneill[n];
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j) os << ',' << csv_number(a(i, j));
    os << '\n';
  }
  return os.str();
}

}  // namespace jacobi
