#pragma once

#include <string>

#include "memsim/action.hpp"
#include "memsim/memory.hpp"

namespace memsim::testing {

inline std::size_t pick(SeededRng& rng, std::size_t n) {
  return static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)) % n;
}

inline std::string random_word(SeededRng& rng) {
  static const std::string alphabet =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-";
  std::string w;
  const std::size_t len = 1 + pick(rng, 8);
  for (std::size_t i = 0; i < len; ++i) w += alphabet[pick(rng, alphabet.size())];
  return w;
}

inline std::string random_name(SeededRng& rng) {
  std::string name = random_word(rng);
  const std::size_t extra = pick(rng, 3);
  for (std::size_t i = 0; i < extra; ++i) name += " " + random_word(rng);
  // "floor in ..." reads as the floor support in a target slot.
  if (name.rfind("floor in", 0) == 0) name[0] = 'F';
  return name;
}

inline int random_id(SeededRng& rng) {
  // Mix of small ids and large ones up to 9 digits.
  return rng.uniform() < 0.7 ? static_cast<int>(pick(rng, 20))
                             : static_cast<int>(pick(rng, 999'999'999));
}

inline ObjectRef random_ref(SeededRng& rng) { return {random_name(rng), random_id(rng)}; }

inline std::string random_thought(SeededRng& rng) {
  static const std::string chars =
      "abcdefghijklmnopqrstuvwxyz ABCDEFGHIJ.,;:!?'\"()[]{}0123456789<>-_/\t";
  std::string text;
  const std::size_t len = pick(rng, 60);
  for (std::size_t i = 0; i < len; ++i) text += chars[pick(rng, chars.size())];
  // A thought may not open with '<' once leading blanks are skipped.
  const auto first = text.find_first_not_of(" \t");
  if (first != std::string::npos && text[first] == '<') text[first] = 'x';
  return text;
}

inline Action random_action(SeededRng& rng) {
  switch (pick(rng, 5)) {
    case 0: return GoToRoom{random_id(rng)};
    case 1: return GoToNewRoom{};
    case 2: return PickUp{random_ref(rng), random_id(rng), random_id(rng)};
    case 3: {
      Support target = rng.uniform() < 0.25 ? Support::floor() : Support::on(random_ref(rng));
      return PutDown{random_ref(rng), random_id(rng), target, random_id(rng)};
    }
    default: return Thought{random_thought(rng)};
  }
}

}  // namespace memsim::testing
