#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace pulsesim::cli {

double round12(double v) { return std::strtod(fmt12(v).c_str(), nullptr); }

std::string fmt12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json json_number(double v) {
  const double r = round12(v);
  if (std::abs(r) < 1e15 && r == std::floor(r)) return static_cast<long long>(r);
  return r;
}

json state_to_json(const QuantumState& s) {
  json j;
  j["kind"] = s.is_ket() ? "ket" : "density";
  j["dims"] = s.dims().sizes();
  const Matrix& d = s.data();
  if (s.is_ket()) {
    std::vector<double> re;
    std::vector<double> im;
    for (long i = 0; i < d.rows(); ++i) {
      re.push_back(round12(d(i, 0).real()));
      im.push_back(round12(d(i, 0).imag()));
    }
    j["real"] = re;
    j["imag"] = im;
  } else {
    json re = json::array();
    json im = json::array();
    for (long r = 0; r < d.rows(); ++r) {
      std::vector<double> rr;
      std::vector<double> ii;
      for (long c = 0; c < d.cols(); ++c) {
        rr.push_back(round12(d(r, c).real()));
        ii.push_back(round12(d(r, c).imag()));
      }
      re.push_back(rr);
      im.push_back(ii);
    }
    j["real"] = std::move(re);
    j["imag"] = std::move(im);
  }
  return j;
}

std::string write_file(const std::filesystem::path& dir, const std::string& name, const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw CliError(kConfigError, "cannot create output directory " + dir.string() + ": " + ec.message());
  std::ofstream f(dir / name, std::ios::binary);
  f << text;
  if (!f) throw CliError(kConfigError, "cannot write " + (dir / name).string());
  return name;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

namespace {

int parse_index(const std::string& s, int num_qubits, const std::string& item) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || v < 0 || v >= num_qubits)
    throw CliError(kConfigError, "bad qubit index in observable '" + item + "'");
  return static_cast<int>(v);
}

// Pauli acting on levels 0 and 1 of a d-level subsystem.
Operator padded(const Operator& pauli, int d) {
  Matrix m = Matrix::Zero(d, d);
  m.topLeftCorner(2, 2) = pauli.matrix();
  return Operator(m);
}

}  // namespace

std::vector<Observable> parse_observables(const std::string& spec, const Dims& dims, int num_qubits) {
  std::vector<Observable> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw CliError(kConfigError, "observable '" + item + "' needs kind:argument");
    const std::string kind = item.substr(0, colon);
    const std::string arg = item.substr(colon + 1);
    if (kind == "x" || kind == "y" || kind == "z") {
      const int j = parse_index(arg, num_qubits, item);
      const Operator p = kind == "x" ? sigmax() : kind == "y" ? sigmay() : sigmaz();
      out.push_back({item, expand_operator(padded(p, dims[j]), {j}, dims)});
    } else if (kind == "pop") {
      const std::vector<int> bits = parse_bits(arg, static_cast<int>(arg.size()));
      if (bits.empty() || static_cast<int>(bits.size()) > num_qubits)
        throw CliError(kConfigError, "observable '" + item + "' has too many bits");
      std::vector<Operator> factors;
      std::vector<int> targets;
      for (std::size_t j = 0; j < bits.size(); ++j) {
        const QuantumState b = basis(dims[static_cast<int>(j)], bits[j]);
        factors.push_back(Operator(b.data() * b.data().adjoint()));
        targets.push_back(static_cast<int>(j));
      }
      out.push_back({item, expand_operator(tensor(factors), targets, dims)});
    } else {
      throw CliError(kConfigError, "unknown observable kind '" + kind + "'");
    }
  }
  return out;
}

std::vector<double> parse_tlist(const std::string& spec, double total_time) {
  double t0 = 0.0;
  double t1 = total_time;
  std::string count = spec;
  const auto c1 = spec.find(':');
  if (c1 != std::string::npos) {
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos) throw CliError(kConfigError, "tlist must be N or t0:t1:N");
    char* end = nullptr;
    const std::string a = spec.substr(0, c1);
    const std::string b = spec.substr(c1 + 1, c2 - c1 - 1);
    t0 = std::strtod(a.c_str(), &end);
    if (a.empty() || *end != '\0') throw CliError(kConfigError, "bad tlist start");
    t1 = std::strtod(b.c_str(), &end);
    if (b.empty() || *end != '\0') throw CliError(kConfigError, "bad tlist stop");
    count = spec.substr(c2 + 1);
  }
  char* end = nullptr;
  const long n = std::strtol(count.c_str(), &end, 10);
  if (count.empty() || *end != '\0' || n < 2 || n > 1000000) throw CliError(kConfigError, "tlist needs 2 to 1e6 points");
  if (!(t1 > t0) || t0 < 0.0) throw CliError(kConfigError, "tlist needs 0 <= t0 < t1");
  std::vector<double> t(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) t[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
  return t;
}

std::vector<int> parse_bits(const std::string& bits, int num_qubits) {
  if (static_cast<int>(bits.size()) != num_qubits)
    throw CliError(kConfigError, "bit string '" + bits + "' must have " + std::to_string(num_qubits) + " digits");
  std::vector<int> out;
  for (char c : bits) {
    if (c != '0' && c != '1') throw CliError(kConfigError, "bit string '" + bits + "' may only contain 0 and 1");
    out.push_back(c - '0');
  }
  return out;
}

}  // namespace pulsesim::cli
