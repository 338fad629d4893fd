#include "srfbm/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace srfbm::harness {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = value.find(',', start);
    out.push_back(trim(value.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double to_double(std::string_view text, const std::string& key, int line) {
  // std::from_chars for double is available in GCC 11.
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(line, "key '" + key + "': '" + std::string(text) + "' is not a number");
  }
  return v;
}

template <class Int>
Int to_integer(std::string_view text, const std::string& key, int line) {
  Int v{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(line, "key '" + key + "': '" + std::string(text) + "' is not an integer");
  }
  return v;
}

std::vector<double> doubles(std::string_view value, const std::string& key, int line) {
  std::vector<double> out;
  for (auto item : split_list(value)) out.push_back(to_double(item, key, line));
  return out;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ParseError("key '" + key + "': " + what);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << v;
  return os.str();
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += fmt(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

struct Entry {
  std::string value;
  int line;
};

}  // namespace

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

ParseError::ParseError(const std::string& message) : std::runtime_error(message) {}

const char* to_string(Mode mode) noexcept {
  switch (mode) {
    case Mode::mcmc: return "mcmc";
    case Mode::naive: return "naive";
    case Mode::importance: return "importance";
    case Mode::tails: return "tails";
    case Mode::verify: return "verify";
  }
  return "?";
}

void SweepConfig::validate() const {
  if (mode == Mode::verify) return;
  require(!dims.empty(), "d", "missing (at least one dimension required)");
  require(!hursts.empty(), "H", "missing (at least one Hurst index required)");
  require(!betas.empty(), "beta", "missing (at least one value required)");
  require(!horizons.empty(), "T", "missing (at least one horizon required)");
  for (int d : dims) require(d >= 1, "d", "must be >= 1, got " + std::to_string(d));
  for (double h : hursts) require(h > 0.0 && h < 1.0, "H", "must lie in the open interval (0,1), got " + fmt(h));
  for (double b : betas) require(b >= 0.0 && std::isfinite(b), "beta", "must be finite and >= 0, got " + fmt(b));
  require(dt > 0.0 && std::isfinite(dt), "dt", "must be positive, got " + fmt(dt));
  for (double t : horizons) {
    require(t > 0.0 && std::isfinite(t), "T", "must be positive, got " + fmt(t));
    const double n = t / dt;
    require(std::abs(n - std::round(n)) <= 1e-9 * std::max(1.0, n) && std::round(n) >= 1.0, "T",
            fmt(t) + " is not a positive multiple of dt = " + fmt(dt));
    if (mode == Mode::importance) {
      require(t > std::numbers::e, "T", "must exceed e for mode=importance, got " + fmt(t));
    }
  }
  require(replicas >= 1, "replicas", "must be >= 1");
  require(!output.empty(), "output", "must not be empty");
  require(pcn_step > 0.0 && pcn_step <= 1.0, "pcn_step", "must lie in (0,1], got " + fmt(pcn_step));
  require(burn_in >= 0, "burn_in", "must be >= 0");
  require(thin >= 0, "thin", "must be >= 0 (0 selects n/8)");
  require(samples >= 1, "samples", "must be >= 1");
  require(adapt_target > 0.0 && adapt_target < 1.0, "adapt_target", "must lie in (0,1)");
  require(mc_samples >= 2, "mc_samples", "must be >= 2");
  if (lambda) require(*lambda >= 0.0 && std::isfinite(*lambda), "lambda", "must be >= 0 or 'star'");
  if (mode == Mode::importance && !lambda) {
    for (double b : betas) require(b > 0.0, "beta", "must be positive when lambda = star");
  }
  if (mode == Mode::tails) {
    require(!radii.empty(), "r", "required for mode=tails");
    for (double r : radii) require(r > 0.0, "r", "must be positive, got " + fmt(r));
  }
}

std::vector<SweepPoint> expand_grid(const SweepConfig& config) {
  std::vector<SweepPoint> out;
  const std::vector<std::optional<double>> rs = [&] {
    std::vector<std::optional<double>> v;
    if (config.mode == Mode::tails) {
      for (double r : config.radii) v.emplace_back(r);
    } else {
      v.emplace_back(std::nullopt);
    }
    return v;
  }();
  for (int d : config.dims)
    for (double h : config.hursts)
      for (double b : config.betas)
        for (double t : config.horizons)
          for (const auto& r : rs) {
            SweepPoint p;
            p.index = out.size();
            p.model = ModelParams::with_step(d, h, b, t, config.dt);
            p.radius = r;
            out.push_back(p);
          }
  return out;
}

SweepConfig parse_config(std::string_view text) {
  std::map<std::string, Entry> entries;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value', got '" + std::string(line) + "'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError(line_no, "missing key before '='");
    if (value.empty()) throw ParseError(line_no, "key '" + key + "' has an empty value");
    if (const auto it = entries.find(key); it != entries.end()) {
      throw ParseError(line_no, "duplicate key '" + key + "' (first set on line " + std::to_string(it->second.line) +
                                    ", again on line " + std::to_string(line_no) + ")");
    }
    entries.emplace(key, Entry{value, line_no});
  }

  SweepConfig c;
  std::map<std::string, int> lines;
  for (const auto& [key, e] : entries) {
    const int ln = e.line;
    const std::string_view v = e.value;
    lines[key] = ln;
    if (key == "mode") {
      if (v == "mcmc") c.mode = Mode::mcmc;
      else if (v == "naive") c.mode = Mode::naive;
      else if (v == "importance") c.mode = Mode::importance;
      else if (v == "tails") c.mode = Mode::tails;
      else if (v == "verify") c.mode = Mode::verify;
      else throw ParseError(ln, "key 'mode': expected one of mcmc, naive, importance, tails, verify");
    } else if (key == "d") {
      for (auto item : split_list(v)) c.dims.push_back(to_integer<int>(item, key, ln));
    } else if (key == "H") {
      c.hursts = doubles(v, key, ln);
    } else if (key == "beta") {
      c.betas = doubles(v, key, ln);
    } else if (key == "T") {
      c.horizons = doubles(v, key, ln);
    } else if (key == "dt") {
      c.dt = to_double(v, key, ln);
    } else if (key == "replicas") {
      c.replicas = to_integer<int>(v, key, ln);
    } else if (key == "master_seed") {
      c.master_seed = to_integer<std::uint64_t>(v, key, ln);
    } else if (key == "output") {
      c.output = std::string(v);
    } else if (key == "pcn_step") {
      c.pcn_step = to_double(v, key, ln);
    } else if (key == "burn_in") {
      c.burn_in = to_integer<int>(v, key, ln);
    } else if (key == "thin") {
      c.thin = to_integer<int>(v, key, ln);
    } else if (key == "samples") {
      c.samples = to_integer<int>(v, key, ln);
    } else if (key == "adapt_target") {
      c.adapt_target = to_double(v, key, ln);
    } else if (key == "mc_samples") {
      c.mc_samples = to_integer<std::size_t>(v, key, ln);
    } else if (key == "lambda") {
      if (v == "star") c.lambda.reset();
      else c.lambda = to_double(v, key, ln);
    } else if (key == "r") {
      c.radii = doubles(v, key, ln);
    } else if (key == "side") {
      if (v == "below") c.side = TailSide::below;
      else if (v == "above") c.side = TailSide::above;
      else throw ParseError(ln, "key 'side': expected below or above");
    } else if (key == "backend") {
      if (v == "auto") c.backend = Backend::automatic;
      else if (v == "cholesky") c.backend = Backend::cholesky;
      else if (v == "circulant") c.backend = Backend::circulant;
      else throw ParseError(ln, "key 'backend': expected auto, cholesky or circulant");
    } else {
      throw ParseError(ln, "unknown key '" + key + "'");
    }
  }
  try {
    c.validate();
  } catch (const ParseError& e) {
    // Attach the line of the key named in the message when there is one.
    const std::string msg = e.what();
    for (const auto& [key, ln] : lines) {
      if (msg.rfind("key '" + key + "'", 0) == 0) throw ParseError(ln, msg);
    }
    throw;
  }
  return c;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string canonical(const SweepConfig& c) {
  std::ostringstream os;
  os << "mode=" << to_string(c.mode) << ";d=" << join(c.dims) << ";H=" << join(c.hursts) << ";beta=" << join(c.betas)
     << ";T=" << join(c.horizons) << ";dt=" << fmt(c.dt) << ";replicas=" << c.replicas
     << ";master_seed=" << c.master_seed << ";pcn_step=" << fmt(c.pcn_step) << ";burn_in=" << c.burn_in
     << ";thin=" << c.thin << ";samples=" << c.samples << ";adapt_target=" << fmt(c.adapt_target)
     << ";mc_samples=" << c.mc_samples << ";lambda=" << (c.lambda ? fmt(*c.lambda) : std::string("star"))
     << ";r=" << join(c.radii) << ";side=" << to_string(c.side) << ";backend=" << to_string(c.backend) << ";";
  return os.str();
}

std::string config_reference() {
  return R"(Config file: one "key = value" per line, '#' comments, lists comma separated.
  mode          mcmc | naive | importance | tails | verify     (default mcmc)
  d             dimensions, list of integers >= 1               (required)
  H             Hurst indices in (0,1), list                    (required)
  beta          inverse temperatures >= 0, list                 (required)
  T             horizons, multiples of dt, list                 (required; > e for importance)
  dt            time step                                       (default 0.25)
  replicas      chains or estimator repeats per point           (default 8)
  master_seed   unsigned 64-bit seed                            (default 1)
  output        output directory                                (default srfbm-out)
  pcn_step      initial pCN step in (0,1]                       (default 0.25)
  burn_in       burn-in steps                                   (default 2000)
  thin          steps between records, 0 = max(1, n/8)          (default 0)
  samples       retained records per chain                      (default 512)
  adapt_target  burn-in acceptance target in (0,1)              (default 0.3)
  mc_samples    paths per estimator replica                     (default 10000)
  lambda        tilt strength >= 0 or 'star'                    (default star)
  r             radii for mode=tails, list                      (required for tails)
  side          below | above                                   (default below)
  backend       auto | cholesky | circulant                     (default auto)
)";
}

}  // namespace srfbm::harness
