#include <algorithm>
#include <cmath>

#include "recip/errors.hpp"
#include "recip/matchmakers.hpp"

namespace recip {

void UrommPolicy::begin(std::size_t n, std::uint64_t, CounterRng rng) {
  n_ = n;
  rng_ = rng;
}

OommCore::OommCore(std::size_t n) : n_(n), bg_seen_(n, n), gb_seen_(n, n), pending_(n) {}

UserIndex OommCore::select_for_girl(UserIndex girl, CounterRng& rng) {
  auto& p = pending_[girl];
  if (p.empty()) return static_cast<UserIndex>(rng.uniform_index(n_));
  const std::size_t k = rng.uniform_index(p.size());
  const UserIndex b = p[k];
  p[k] = p.back();
  p.pop_back();
  return b;
}

void OommCore::observe_boy(UserIndex boy, UserIndex girl) {
  if (bg_seen_.test(boy, girl)) return;
  bg_seen_.set(boy, girl);
  if (!gb_seen_.test(girl, boy)) pending_[girl].push_back(boy);
}

void OommCore::observe_girl(UserIndex girl, UserIndex boy) { gb_seen_.set(girl, boy); }

void OommPolicy::begin(std::size_t n, std::uint64_t, CounterRng rng) {
  core_ = OommCore(n);
  rng_ = rng;
}

std::uint64_t smile_s_prime(std::uint64_t s, std::size_t n) {
  const double ln = n > 1 ? std::log(static_cast<double>(n)) : 0.0;
  return 2 * s + 4 * static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(s) * ln)));
}

std::uint64_t ismile_s_prime(std::uint64_t s, std::size_t n) {
  const double ln = n > 1 ? std::log(static_cast<double>(n)) : 0.0;
  return s + static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(s) * ln)));
}

SChoice choose_S(double m_hat, std::size_t n, double gamma) {
  if (!(m_hat >= 1.0)) throw InputError("M_hat must be at least 1");
  if (!(gamma > 0.0)) throw InputError("gamma must be positive");
  if (n == 0) throw InputError("empty instance");
  std::uint64_t s = 1;
  if (n >= 3) {
    const double nn = static_cast<double>(n);
    const double ln = std::log(nn);
    const double lo = std::ceil(ln);
    const double hi = std::max(lo, std::floor(nn / ln));
    const double raw = std::ceil(gamma * nn * nn * ln / m_hat);
    s = static_cast<std::uint64_t>(std::clamp(raw, lo, hi));
  }
  return {s, smile_s_prime(s, n)};
}

}  // namespace recip
