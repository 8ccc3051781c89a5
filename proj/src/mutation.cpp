#include "whitneypot/mutation.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <tuple>

#include "whitneypot/errors.hpp"

namespace whitneypot {

std::int64_t det(const Vec2& u, const Vec2& v) { return u[0] * v[1] - u[1] * v[0]; }

Seed initial_seed() {
  Seed s;
  s.potential = parse_laurent("x + y + x^-1*y^-1", {"x", "y"});
  s.classes = {Vec2{-2, -1}, Vec2{1, -1}, Vec2{1, 2}};
  s.triple = {1, 1, 1};
  return s;
}

namespace {

// u a + v b = gcd(a, b) >= 0
std::tuple<std::int64_t, std::int64_t, std::int64_t> egcd(std::int64_t a, std::int64_t b) {
  if (b == 0) return a >= 0 ? std::tuple{a, std::int64_t{1}, std::int64_t{0}}
                            : std::tuple{-a, std::int64_t{-1}, std::int64_t{0}};
  auto [g, x, y] = egcd(b, a % b);
  return {g, y, x - (a / b) * y};
}

std::int64_t floor_div(std::int64_t n, std::int64_t d) {
  std::int64_t q = n / d;
  if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
  return q;
}

}  // namespace

Matrix2 normalizing_matrix(const Vec2& g) {
  const auto [a, b] = g;
  auto [d, u, v] = egcd(a, b);
  if (d != 1) throw InvalidInput("disk class must be primitive");

  std::vector<std::int64_t> ks;
  auto around = [&](std::int64_t num, std::int64_t den) {
    if (den == 0) return;
    std::int64_t f = floor_div(num, den);
    for (std::int64_t k = f - 1; k <= f + 2; ++k) ks.push_back(k);
  };
  around(-u, b);  // zero of u + k b
  around(v, a);   // zero of v - k a
  if (ks.empty()) ks.push_back(0);

  auto key = [&](std::int64_t k) {
    std::int64_t uu = u + k * b, vv = v - k * a;
    return std::tuple{std::abs(uu) + std::abs(vv), std::abs(uu), uu, vv};
  };
  std::int64_t best = ks.front();
  for (auto k : ks)
    if (key(k) < key(best)) best = k;
  return Matrix2{{{b, -a}, {u + best * b, v - best * a}}};
}

Matrix2 inverse(const Matrix2& m) {
  return Matrix2{{{m[1][1], -m[0][1]}, {-m[1][0], m[0][0]}}};
}

Vec2 act(const Matrix2& m, const Vec2& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

Normalized normalize_basis(const Seed& s, int j) {
  if (j < 0 || j > 2) throw InvalidInput("disk index must be 0, 1 or 2");
  Matrix2 m = normalizing_matrix(s.classes[j]);
  Seed out = s;
  out.potential = apply_unimodular(s.potential, m);
  for (auto& c : out.classes) c = act(m, c);
  return {out, m};
}

Seed mutate_seed(const Seed& s, int j) {
  auto [n, m] = normalize_basis(s, j);
  std::vector<UnitImage> images{
      UnitImage{1, {1, 0}, 1},  // x -> x (1+y)
      UnitImage{1, {0, 1}, 0},  // y -> y
  };
  Laurent moved;
  try {
    moved = clear_denominator(substitute_units(n.potential, images, 1));
  } catch (const NotLaurent&) {
    throw NotLaurent("mutation at disk " + std::to_string(j) + " of triple " + triple_to_string(s.triple) +
                     " left a (1+y) denominator");
  }

  Seed out;
  out.potential = apply_unimodular(moved, inverse(m));
  out.triple = mutate_triple(s.triple, j);
  out.spin = s.spin;
  const Vec2 g = s.classes[j];
  for (int k = 0; k < 3; ++k) {
    if (k == j) {
      out.classes[k] = {-g[0], -g[1]};
    } else {
      std::int64_t c = std::max<std::int64_t>(0, det(s.classes[k], g));
      out.classes[k] = {s.classes[k][0] + c * g[0], s.classes[k][1] + c * g[1]};
    }
  }
  return out;
}

namespace {

std::mutex memo_mutex;
std::map<std::vector<int>, std::shared_ptr<const Seed>> memo;
constexpr std::size_t kMemoDepth = 3;

std::filesystem::path cache_file(const std::filesystem::path& dir, const std::vector<int>& path) {
  std::string name = "seed_";
  if (path.empty()) name += "root";
  for (std::size_t i = 0; i < path.size(); ++i) name += (i ? "-" : "") + std::to_string(path[i]);
  return dir / (name + ".json");
}

std::shared_ptr<const Seed> lookup(const std::vector<int>& path) {
  {
    std::lock_guard lock(memo_mutex);
    auto it = memo.find(path);
    if (it != memo.end()) return it->second;
  }
  const char* dir = std::getenv("WHITNEYPOT_CACHE");
  if (!dir || !*dir) return nullptr;
  std::ifstream in(cache_file(dir, path));
  if (!in) return nullptr;
  try {
    auto seed = std::make_shared<const Seed>(seed_from_json(nlohmann::json::parse(in)));
    if (seed->triple != triple_along_path(path)) return nullptr;
    return seed;
  } catch (const std::exception&) {
    return nullptr;  // unreadable cache entries are recomputed
  }
}

void store(const std::vector<int>& path, const std::shared_ptr<const Seed>& seed) {
  if (path.size() <= kMemoDepth) {
    std::lock_guard lock(memo_mutex);
    memo.emplace(path, seed);
  }
  const char* dir = std::getenv("WHITNEYPOT_CACHE");
  if (!dir || !*dir) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  auto file = cache_file(dir, path);
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << seed_to_json(*seed).dump();
  }
  std::filesystem::rename(tmp, file, ec);
}

}  // namespace

Seed seed_along_path(const std::vector<int>& path) {
  for (int j : path)
    if (j < 0 || j > 2) throw InvalidInput("path entries must be 0, 1 or 2");
  std::size_t have = path.size() + 1;
  std::shared_ptr<const Seed> cur;
  while (have-- > 0) {
    if ((cur = lookup({path.begin(), path.begin() + static_cast<std::ptrdiff_t>(have)}))) break;
  }
  if (!cur) {
    cur = std::make_shared<const Seed>(initial_seed());
    have = 0;
    store({}, cur);
  }
  for (std::size_t i = have; i < path.size(); ++i) {
    cur = std::make_shared<const Seed>(mutate_seed(*cur, path[i]));
    store({path.begin(), path.begin() + static_cast<std::ptrdiff_t>(i + 1)}, cur);
  }
  return *cur;
}

nlohmann::json seed_to_json(const Seed& s) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : s.classes) classes.push_back({c[0], c[1]});
  return {{"triple", {s.triple[0].get_str(), s.triple[1].get_str(), s.triple[2].get_str()}},
          {"disk_classes", classes},
          {"spin", s.spin},
          {"potential", to_json(s.potential)}};
}

Seed seed_from_json(const nlohmann::json& j) {
  Seed s;
  const auto& t = j.at("triple");
  if (!t.is_array() || t.size() != 3) throw InvalidInput("seed triple must have three entries");
  for (int i = 0; i < 3; ++i)
    s.triple[i] = t[i].is_string() ? mpz_class(t[i].get<std::string>()) : mpz_class(t[i].get<long>());
  const auto& c = j.at("disk_classes");
  if (!c.is_array() || c.size() != 3) throw InvalidInput("seed needs three disk classes");
  for (int i = 0; i < 3; ++i) s.classes[i] = {c[i].at(0).get<std::int64_t>(), c[i].at(1).get<std::int64_t>()};
  s.spin = j.value("spin", false);
  s.potential = laurent_from_json(j.at("potential"), 2);
  return s;
}

}  // namespace whitneypot
