#include "vtl/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "vtl/error.hpp"

namespace vtl {

namespace {

std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& tok, const char* what) {
  try {
    std::size_t used = 0;
    const double x = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return x;
  } catch (const std::exception&) {
    throw InputError(std::string(what) + ": bad number '" + tok + "'");
  }
}

long parse_long(const std::string& tok, const char* what) {
  try {
    std::size_t used = 0;
    const long x = std::stol(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return x;
  } catch (const std::exception&) {
    throw InputError(std::string(what) + ": bad integer '" + tok + "'");
  }
}

std::string next_line(std::istream& is, const char* what) {
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
  }
  throw InputError(std::string(what) + ": missing header");
}

std::vector<std::string> split(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

void check_dims(const Grid& g, long n, long J, long L, const char* what) {
  if (n != g.n || J != g.J || L != g.L)
    throw InputError(std::string(what) + ": grid (n=" + std::to_string(n) + ", J=" + std::to_string(J) +
                     ", L=" + std::to_string(L) + ") does not match (n=" + std::to_string(g.n) +
                     ", J=" + std::to_string(g.J) + ", L=" + std::to_string(g.L) + ")");
}

std::vector<double> read_values(std::istream& is, std::size_t count, const char* what) {
  std::vector<double> out;
  out.reserve(count);
  std::string tok;
  while (out.size() < count && is >> tok) {
    if (tok.front() == '#') {
      std::string rest;
      std::getline(is, rest);
      continue;
    }
    out.push_back(parse_double(tok, what));
  }
  if (out.size() != count)
    throw InputError(std::string(what) + ": expected " + std::to_string(count) + " values, got " +
                     std::to_string(out.size()));
  return out;
}

std::ifstream open(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open '" + path + "'");
  return is;
}

}  // namespace

ExponentField read_exponent(std::istream& is, const Grid& grid) {
  const auto head = split(next_line(is, "exponent file"));
  if (head.empty() || head[0] != "exponent") throw InputError("exponent file: header must start with 'exponent'");
  std::map<std::string, long> kv;
  for (std::size_t i = 1; i < head.size(); ++i) {
    const auto eq = head[i].find('=');
    if (eq == std::string::npos) throw InputError("exponent file: bad header field '" + head[i] + "'");
    kv[head[i].substr(0, eq)] = parse_long(head[i].substr(eq + 1), "exponent file");
  }
  for (const char* k : {"n", "J", "L"})
    if (!kv.count(k)) throw InputError(std::string("exponent file: header lacks ") + k);
  check_dims(grid, kv["n"], kv["J"], kv["L"], "exponent file");
  auto vals = read_values(is, grid.cell_count(), "exponent file");
  for (double x : vals)
    if (std::isnan(x) || x <= 0.0) throw InputError("exponent file: values must be positive");
  ExponentField p(grid, std::move(vals));
  if (!p.has_infinite()) p.certify();
  return p;
}

void write_exponent(std::ostream& os, const ExponentField& p) {
  const Grid& g = p.grid();
  os << "exponent n=" << g.n << " J=" << g.J << " L=" << g.L << '\n';
  for (std::size_t c = 0; c < p.size(); ++c) os << num(p[c]) << ((c + 1) % 8 == 0 ? '\n' : ' ');
  os << '\n';
}

ExponentField load_exponent(const Grid& grid, const std::string& preset_or_path) {
  if (preset_or_path == "inf" || preset_or_path.rfind("const:", 0) == 0 ||
      preset_or_path.rfind("sin:", 0) == 0 || preset_or_path.rfind("step:", 0) == 0)
    return ExponentField::from_spec(grid, preset_or_path);
  std::ifstream is = open(preset_or_path);
  return read_exponent(is, grid);
}

namespace {

GridFunction read_gridfn_block(std::istream& is, const Grid& grid) {
  const auto head = split(next_line(is, "gridfn"));
  if (head.size() < 5 || head.size() > 6 || head[0] != "gridfn")
    throw InputError("gridfn: header must be 'gridfn n J L real|complex [binary]'");
  check_dims(grid, parse_long(head[1], "gridfn"), parse_long(head[2], "gridfn"),
             parse_long(head[3], "gridfn"), "gridfn");
  bool complex = false;
  if (head[4] == "complex")
    complex = true;
  else if (head[4] != "real")
    throw InputError("gridfn: kind must be real or complex");
  const bool binary = head.size() == 6;
  if (binary && head[5] != "binary") throw InputError("gridfn: unknown flag '" + head[5] + "'");
  const std::size_t N = grid.cell_count() * (complex ? 2 : 1);
  std::vector<double> raw;
  if (binary) {
    raw.resize(N);
    std::vector<unsigned char> bytes(N * 8);
    if (!is.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size())))
      throw InputError("gridfn: truncated binary payload");
    for (std::size_t i = 0; i < N; ++i) {
      std::uint64_t u = 0;
      for (int b = 7; b >= 0; --b) u = (u << 8) | bytes[i * 8 + static_cast<std::size_t>(b)];
      raw[i] = std::bit_cast<double>(u);
    }
  } else {
    raw = read_values(is, N, "gridfn");
  }
  std::vector<Complex> vals(grid.cell_count());
  for (std::size_t c = 0; c < vals.size(); ++c)
    vals[c] = complex ? Complex(raw[2 * c], raw[2 * c + 1]) : Complex(raw[c], 0.0);
  GridFunction f(grid, std::move(vals), !complex);
  if (!f.all_finite()) throw InputError("gridfn: non-finite value");
  return f;
}

}  // namespace

GridFunction read_gridfn(std::istream& is, const Grid& grid) { return read_gridfn_block(is, grid); }

void write_gridfn(std::ostream& os, const GridFunction& f, bool binary) {
  const Grid& g = f.grid();
  const bool complex = !f.is_real();
  os << "gridfn " << g.n << ' ' << g.J << ' ' << g.L << ' ' << (complex ? "complex" : "real")
     << (binary ? " binary" : "") << '\n';
  if (binary) {
    for (const Complex& z : f.values()) {
      const double parts[2] = {z.real(), z.imag()};
      for (int k = 0; k < (complex ? 2 : 1); ++k) {
        std::uint64_t u = std::bit_cast<std::uint64_t>(parts[k]);
        unsigned char bytes[8];
        for (int b = 0; b < 8; ++b, u >>= 8) bytes[b] = static_cast<unsigned char>(u & 0xff);
        os.write(reinterpret_cast<const char*>(bytes), 8);
      }
    }
    return;
  }
  std::size_t i = 0;
  for (const Complex& z : f.values()) {
    os << num(z.real());
    if (complex) os << ' ' << num(z.imag());
    os << (++i % 8 == 0 ? '\n' : ' ');
  }
  os << '\n';
}

FunctionSequence read_fnseq(std::istream& is, const Grid& grid) {
  const auto head = split(next_line(is, "fnseq"));
  if (head.size() != 3 || head[0] != "fnseq") throw InputError("fnseq: header must be 'fnseq count v_start'");
  const long count = parse_long(head[1], "fnseq");
  const long v0 = parse_long(head[2], "fnseq");
  if (count < 1) throw InputError("fnseq: count must be >= 1");
  FunctionSequence fs;
  fs.v_start = static_cast<int>(v0);
  for (long k = 0; k < count; ++k) fs.levels.push_back(read_gridfn_block(is, grid));
  return fs;
}

void write_fnseq(std::ostream& os, const FunctionSequence& fs) {
  os << "fnseq " << fs.levels.size() << ' ' << fs.v_start << '\n';
  for (const GridFunction& f : fs.levels) write_gridfn(os, f);
}

CoeffSequence read_coefficients(std::istream& is, const Grid& grid) {
  CoeffSequence lambda(grid);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto tok = split(line);
    if (tok.empty()) continue;
    const std::size_t idx = 1 + static_cast<std::size_t>(grid.n);
    if (tok.size() != idx + 1 && tok.size() != idx + 2)
      throw InputError("coefficients line " + std::to_string(lineno) + ": expected 'v m1" +
                       (grid.n == 2 ? " m2" : "") + " re [im]'");
    DyadicCube Q;
    Q.v = static_cast<int>(parse_long(tok[0], "coefficients"));
    for (int i = 0; i < grid.n; ++i) Q.m[static_cast<std::size_t>(i)] = parse_long(tok[1 + static_cast<std::size_t>(i)], "coefficients");
    const double re = parse_double(tok[idx], "coefficients");
    const double im = tok.size() == idx + 2 ? parse_double(tok[idx + 1], "coefficients") : 0.0;
    if (!std::isfinite(re) || !std::isfinite(im)) throw InputError("coefficients: non-finite value");
    if (Q.v < 0 || Q.v > grid.V_max)
      throw InputError("coefficients line " + std::to_string(lineno) + ": level outside 0..V_max");
    lambda.at(Q) = Complex(re, im);
  }
  return lambda;
}

void write_coefficients(std::ostream& os, const CoeffSequence& lambda) {
  const Grid& g = lambda.grid();
  for (int v = 0; v <= g.V_max; ++v) {
    const auto& lv = lambda.level(v);
    for (std::size_t k = 0; k < lv.size(); ++k) {
      if (lv[k] == Complex{}) continue;
      const DyadicCube Q = cube_from_slot(g, v, k);
      os << v << ' ' << Q.m[0];
      if (g.n == 2) os << ' ' << Q.m[1];
      os << ' ' << num(lv[k].real()) << ' ' << num(lv[k].imag()) << '\n';
    }
  }
}

std::vector<DyadicCube> read_cubes(std::istream& is, int n) {
  std::vector<DyadicCube> out;
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto tok = split(line);
    if (tok.empty()) continue;
    if (tok.size() != static_cast<std::size_t>(n) + 1) throw InputError("cube list: expected 'v m1 [m2]'");
    DyadicCube Q;
    Q.v = static_cast<int>(parse_long(tok[0], "cube list"));
    for (int i = 0; i < n; ++i) Q.m[static_cast<std::size_t>(i)] = parse_long(tok[1 + static_cast<std::size_t>(i)], "cube list");
    out.push_back(Q);
  }
  return out;
}

void write_certificate(std::ostream& os, const PhiCertificate& c) {
  os << "cutoff=" << c.cutoff << '\n'
     << "samples_per_unit=" << num(c.samples_per_unit) << '\n'
     << "supports_exact=" << (c.supports_exact ? "true" : "false") << '\n'
     << "phi0_lower=" << num(c.phi0_lower) << '\n'
     << "phi_lower=" << num(c.phi_lower) << '\n'
     << "d_min=" << num(c.d_min) << '\n'
     << "calderon_residual=" << num(c.calderon_residual) << '\n'
     << "partition_residual=" << num(c.partition_residual) << '\n'
     << "moment_max=" << num(c.moment_max) << '\n'
     << "dft_spacing=" << num(c.dft_spacing) << '\n'
     << "dft_transition_samples=" << c.dft_transition_samples << '\n';
}

void write_phisys(std::ostream& os, const PhiSystem& sys) {
  const Grid& g = sys.grid;
  os << "phisys " << g.n << ' ' << g.J << ' ' << g.L << ' ' << g.V_max << '\n';
  const auto row = [&](const char* name, const std::vector<double>& xs) {
    os << name;
    for (double x : xs) os << ' ' << num(x);
    os << '\n';
  };
  row("Phi", sys.Phi);
  row("phi", sys.phi);
  row("Psi", sys.Psi);
  row("psi", sys.psi);
  write_certificate(os, sys.certificate);
}

GridFunction load_gridfn(const std::string& path, const Grid& grid) {
  std::ifstream is = open(path);
  return read_gridfn(is, grid);
}

FunctionSequence load_fnseq(const std::string& path, const Grid& grid) {
  std::ifstream is = open(path);
  return read_fnseq(is, grid);
}

CoeffSequence load_coefficients(const std::string& path, const Grid& grid) {
  std::ifstream is = open(path);
  return read_coefficients(is, grid);
}

}  // namespace vtl
