#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "ordvote/error.hpp"
#include "ordvote/matrix.hpp"

namespace ordvote {

// A list of complete linear ballots over alternatives 0..n-1. The zero
// matrix realizes as the empty ballot list, so zero ballots are permitted;
// margins of an empty profile are all zero by convention.
struct Profile {
  int n = 0;
  std::vector<std::vector<Alt>> ballots;

  static Profile make(int n, std::vector<std::vector<Alt>> ballots) {
    if (n < 1) fail(Errc::bad_input, "need at least one alternative");
    for (const auto& b : ballots) {
      if ((int)b.size() != n) fail(Errc::bad_input, "ballot length must equal n");
      std::vector<char> hit(n, 0);
      for (Alt a : b) {
        if (a < 0 || a >= n || hit[a]) fail(Errc::bad_input, "ballot is not a permutation");
        hit[a] = 1;
      }
    }
    return Profile{n, std::move(ballots)};
  }
};

// Pairwise margins: voters ranking a above b minus voters ranking b above a.
// Margin parity equals ballot-count parity, so an odd number of ballots over
// two or more alternatives cannot produce a valid (even) matrix.
inline MarginMatrix margins(const Profile& p) {
  if (p.n >= 2 && p.ballots.size() % 2 == 1)
    fail(Errc::odd_margin, std::to_string(p.ballots.size()) + " ballots give odd margins");
  std::vector<std::vector<int>> w(p.n, std::vector<int>(p.n, 0));
  for (const auto& ballot : p.ballots) {
    for (int i = 0; i < p.n; ++i) {
      for (int j = i + 1; j < p.n; ++j) {
        ++w[ballot[i]][ballot[j]];
        --w[ballot[j]][ballot[i]];
      }
    }
  }
  return MarginMatrix::from_weights(p.n, std::move(w));
}

// Builds a profile whose margins equal the matrix exactly. For each pair
// with w[a][b] = 2k > 0 it appends k two-ballot gadgets
//   a > b > c1 > ... > c_{n-2}
//   c_{n-2} > ... > c1 > a > b
// which add +2 to the (a,b) margin and cancel on every other pair.
inline Profile realize(const MarginMatrix& m) {
  int n = m.size();
  Profile p;
  p.n = n;
  for (Alt a = 0; a < n; ++a) {
    for (Alt b = a + 1; b < n; ++b) {
      int w = m.weight(a, b);
      Alt x = a, y = b;
      if (w < 0) {
        std::swap(x, y);
        w = -w;
      }
      std::vector<Alt> rest;
      for (Alt c = 0; c < n; ++c)
        if (c != a && c != b) rest.push_back(c);
      for (int k = 0; k < w / 2; ++k) {
        std::vector<Alt> first{x, y};
        first.insert(first.end(), rest.begin(), rest.end());
        std::vector<Alt> second(rest.rbegin(), rest.rend());
        second.push_back(x);
        second.push_back(y);
        p.ballots.push_back(std::move(first));
        p.ballots.push_back(std::move(second));
      }
    }
  }
  return p;
}

// I.i.d. uniform ballots, deterministic per seed. Voter count must be even
// so the margins stay even.
inline Profile sample_impartial_culture(int n, int voters, std::uint64_t seed) {
  if (n < 1) fail(Errc::bad_input, "need at least one alternative");
  if (voters % 2 != 0) fail(Errc::odd_voter_count, std::to_string(voters) + " voters");
  std::mt19937_64 rng(seed);
  Profile p;
  p.n = n;
  p.ballots.reserve(voters);
  for (int v = 0; v < voters; ++v) {
    std::vector<Alt> ballot(n);
    for (int i = 0; i < n; ++i) ballot[i] = i;
    for (int i = n - 1; i > 0; --i) {
      int j = (int)(rng() % (std::uint64_t)(i + 1));
      std::swap(ballot[i], ballot[j]);
    }
    p.ballots.push_back(std::move(ballot));
  }
  return p;
}

}  // namespace ordvote
