#pragma once

// Random documents and input mutators for round-trip and fuzz tests.

#include <random>
#include <string>

#include "lrkit/formats.hpp"
#include "lrkit/lrsplines.hpp"
#include "support/builders.hpp"

namespace docs {

using namespace lrkit;

/// A random valid document: random LR refinements, random control values,
/// sometimes rational, random type and gamma rescaling.
inline LRSplineDocument random_document(std::mt19937& rng) {
  const int p = static_cast<int>(rng() % 3) + 1;
  auto c = build::uniform_lr(static_cast<int>(rng() % 4) + 2, p, static_cast<int>(rng() % 2) + 1);
  const int splits = static_cast<int>(rng() % 5);
  for (int i = 0; i < splits; ++i) c = refine(c, build::random_split(rng, c));
  LRSplineDocument doc;
  doc.collection = build::with_random_coefficients(rng, c.splines, 1 + rng() % 4);
  doc.type = static_cast<SplineType>(rng() % 5);
  doc.collection.independence = static_cast<Independence>(rng() % 3);
  std::uniform_real_distribution<double> w(0.1, 10);
  if (rng() % 2) {
    doc.collection.rational = true;
    for (auto& m : doc.collection.members) m.weight = w(rng);
  }
  for (auto& m : doc.collection.members) {
    Rational f(static_cast<long>(rng() % 7 + 1), static_cast<long>(rng() % 5 + 1));
    f.canonicalize();
    m.gamma *= f;
  }
  return doc;
}

/// One to four random edits of a text document: byte overwrite, deletion,
/// insertion of a plausible character, truncation or a duplicated line.
inline void mutate_text(std::mt19937& rng, std::string& s) {
  const int edits = 1 + static_cast<int>(rng() % 4);
  for (int e = 0; e < edits && !s.empty(); ++e) {
    const std::size_t at = rng() % s.size();
    switch (rng() % 5) {
      case 0: s[at] = static_cast<char>(rng() % 256); break;
      case 1: s.erase(at, 1 + rng() % 8); break;
      case 2: s.insert(at, 1, "0123456789:-/ \nx."[rng() % 17]); break;
      case 3: s.resize(at); break;
      default: {
        // Duplicate a line.
        const auto a = s.rfind('\n', at);
        const auto b = s.find('\n', at);
        if (a != std::string::npos && b != std::string::npos) s.insert(b + 1, s.substr(a + 1, b - a));
      }
    }
  }
}

/// One to four byte overwrites, deletions or truncations.
inline void mutate_bytes(std::mt19937& rng, std::string& s) {
  const int edits = 1 + static_cast<int>(rng() % 4);
  for (int e = 0; e < edits && !s.empty(); ++e) {
    const std::size_t at = rng() % s.size();
    switch (rng() % 3) {
      case 0: s[at] = static_cast<char>(rng() % 256); break;
      case 1: s.erase(at, 1 + rng() % 16); break;
      default: s.resize(at);
    }
  }
}

}  // namespace docs
