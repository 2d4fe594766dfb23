#include "sepspin/model_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>
#include <vector>

namespace sepspin {
namespace {

template <class T>
T parse_number(std::string_view token, std::size_t line) {
  T value{};
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line, "cannot parse number '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

ModelSpec read_model(std::istream& in) {
  std::map<std::size_t, int> spins;
  std::map<std::size_t, double> fields;
  // key: (axis, i, j)
  std::map<std::tuple<char, std::size_t, std::size_t>, double> couplings;
  std::size_t max_site = 0;
  bool any = false;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    const std::string& kind = tok[0];
    auto site = [&](const std::string& t) {
      const auto s = parse_number<std::size_t>(t, line_no);
      max_site = std::max(max_site, s);
      any = true;
      return s;
    };
    if (kind == "spin") {
      if (tok.size() != 3) throw ParseError(line_no, "expected 'spin i 2s'");
      const auto i = site(tok[1]);
      const int twice_s = parse_number<int>(tok[2], line_no);
      if (twice_s < 1) throw ParseError(line_no, "2s must be a positive integer");
      if (!spins.emplace(i, twice_s).second) throw ParseError(line_no, "duplicate spin record for site " + tok[1]);
    } else if (kind == "field") {
      if (tok.size() != 3) throw ParseError(line_no, "expected 'field i value'");
      const auto i = site(tok[1]);
      if (!fields.emplace(i, parse_number<double>(tok[2], line_no)).second) {
        throw ParseError(line_no, "duplicate field record for site " + tok[1]);
      }
    } else if (kind == "vx" || kind == "vy" || kind == "vz") {
      if (tok.size() != 4) throw ParseError(line_no, "expected '" + kind + " i j value'");
      const auto i = site(tok[1]);
      const auto j = site(tok[2]);
      if (!couplings.emplace(std::make_tuple(kind[1], i, j), parse_number<double>(tok[3], line_no)).second) {
        throw ParseError(line_no, "duplicate " + kind + " record for pair (" + tok[1] + "," + tok[2] + ")");
      }
    } else {
      throw ParseError(line_no, "unknown record '" + kind + "'");
    }
  }
  if (!any) throw ParseError(line_no, "model has no sites");

  const std::size_t n = max_site + 1;
  std::vector<SpinValue> sv;
  for (std::size_t i = 0; i < n; ++i) {
    auto it = spins.find(i);
    if (it == spins.end()) throw ParseError(line_no, "missing spin record for site " + std::to_string(i));
    sv.emplace_back(it->second);
  }
  ModelSpec spec(std::move(sv));
  for (auto [i, b] : fields) spec.fields(static_cast<Eigen::Index>(i)) = b;
  for (const auto& [key, v] : couplings) {
    const auto [a, i, j] = key;
    Eigen::MatrixXd& m = a == 'x' ? spec.couplings.vx : (a == 'y' ? spec.couplings.vy : spec.couplings.vz);
    const auto ii = static_cast<Eigen::Index>(i);
    const auto jj = static_cast<Eigen::Index>(j);
    m(ii, jj) = v;
    if (i != j && !couplings.contains(std::make_tuple(a, j, i))) m(jj, ii) = v;
  }
  return spec;
}

ModelSpec read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
  return read_model(in);
}

void write_model(std::ostream& out, const ModelSpec& spec) {
  const std::size_t n = spec.size();
  for (std::size_t i = 0; i < n; ++i) out << "spin " << i << ' ' << spec.spins[i].twice_s() << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    const double b = spec.fields(static_cast<Eigen::Index>(i));
    if (b != 0.0) out << "field " << i << ' ' << format_double(b) << '\n';
  }
  const std::pair<const char*, const Eigen::MatrixXd*> axes[] = {
      {"vx", &spec.couplings.vx}, {"vy", &spec.couplings.vy}, {"vz", &spec.couplings.vz}};
  for (const auto& [name, m] : axes) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const double a = (*m)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        const double b = (*m)(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
        if (a != 0.0 || b != a) out << name << ' ' << i << ' ' << j << ' ' << format_double(a) << '\n';
        if (b != a) out << name << ' ' << j << ' ' << i << ' ' << format_double(b) << '\n';
      }
    }
  }
}

}  // namespace sepspin
