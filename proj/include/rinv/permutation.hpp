#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rinv {

// A permutation of the slot set {0..m-1} carrying a sign in {+1,-1}.
//
// Internally stored as a plain permutation on m+2 points: the last two
// points form the "sign pair" and are swapped exactly when the sign is -1.
// With that encoding composition, inversion, orbits and stabilizer chains
// are the ordinary unsigned algorithms; the sign never needs special cases.
class SignedPerm {
 public:
  SignedPerm() = default;

  static SignedPerm identity(int slots) {
    SignedPerm p;
    p.img_.resize(slots + 2);
    for (int i = 0; i < slots + 2; ++i) p.img_[i] = static_cast<std::uint8_t>(i);
    return p;
  }

  // images[i] = image of slot i (0-based); sign applied on top.
  static SignedPerm from_images(std::span<const int> images, int sign) {
    const int m = static_cast<int>(images.size());
    SignedPerm p = identity(m);
    std::vector<char> seen(m, 0);
    for (int i = 0; i < m; ++i) {
      const int v = images[i];
      if (v < 0 || v >= m || seen[v]) throw std::invalid_argument("not a bijection on slots");
      seen[v] = 1;
      p.img_[i] = static_cast<std::uint8_t>(v);
    }
    if (sign == -1) p.flip_sign();
    else if (sign != 1) throw std::invalid_argument("sign must be +1 or -1");
    return p;
  }

  // Disjoint-cycle convenience for tests and generator tables, 0-based.
  static SignedPerm from_cycles(int slots, std::initializer_list<std::initializer_list<int>> cycles,
                                int sign = 1) {
    std::vector<int> img(slots);
    for (int i = 0; i < slots; ++i) img[i] = i;
    for (const auto& cyc : cycles) {
      std::vector<int> c(cyc);
      for (std::size_t i = 0; i < c.size(); ++i) img[c[i]] = c[(i + 1) % c.size()];
    }
    return from_images(img, sign);
  }

  int slots() const { return static_cast<int>(img_.size()) - 2; }
  bool valid() const { return img_.size() >= 2; }

  int apply(int slot) const { return img_[slot]; }
  int operator()(int slot) const { return img_[slot]; }

  int sign() const { return img_[slots()] == static_cast<std::uint8_t>(slots()) ? 1 : -1; }

  void flip_sign() {
    const int m = slots();
    std::swap(img_[m], img_[m + 1]);
  }

  bool is_identity() const {
    for (std::size_t i = 0; i < img_.size(); ++i)
      if (img_[i] != i) return false;
    return true;
  }

  bool is_identity_on_slots() const {
    const int m = slots();
    for (int i = 0; i < m; ++i)
      if (img_[i] != i) return false;
    return true;
  }

  // (a * b)(x) = a(b(x))
  friend SignedPerm operator*(const SignedPerm& a, const SignedPerm& b) {
    SignedPerm r;
    r.img_.resize(a.img_.size());
    for (std::size_t i = 0; i < a.img_.size(); ++i) r.img_[i] = a.img_[b.img_[i]];
    return r;
  }

  SignedPerm inverse() const {
    SignedPerm r;
    r.img_.resize(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) r.img_[img_[i]] = static_cast<std::uint8_t>(i);
    return r;
  }

  friend bool operator==(const SignedPerm& a, const SignedPerm& b) { return a.img_ == b.img_; }
  friend bool operator<(const SignedPerm& a, const SignedPerm& b) { return a.img_ < b.img_; }

  const std::vector<std::uint8_t>& raw() const { return img_; }

  std::string str() const {
    std::string s = sign() < 0 ? "-[" : "+[";
    for (int i = 0; i < slots(); ++i) {
      if (i) s += ' ';
      s += std::to_string(static_cast<int>(img_[i]));
    }
    return s + "]";
  }

 private:
  std::vector<std::uint8_t> img_;
};

}  // namespace rinv
