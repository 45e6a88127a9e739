#pragma once

#include "fquant/error.hpp"
#include "fquant/rifs.hpp"
#include "fquant/spec_io.hpp"

#include <string>

namespace fquant {

/// The three bundled example systems (same text as data/example{1,2,3}.json).
namespace fixtures {

inline constexpr const char* kExample1 = R"json({
  "dimension": 1,
  "ambient": {"lo": [0], "hi": [1]},
  "components": [
    {
      "maps": [
        {"ratio": "1/5", "translation": ["1/5"]},
        {"ratio": "1/5", "translation": ["3/5"]}
      ],
      "probs": [0.5, 0.5]
    },
    {
      "maps": [
        {"ratio": "1/5", "translation": ["1/6"]},
        {"ratio": "1/5", "translation": ["3/6"]}
      ],
      "probs": [0.3, 0.7]
    }
  ],
  "zeta": [0.5, 0.5],
  "r": 1
}
)json";

inline constexpr const char* kExample2 = R"json({
  "dimension": 1,
  "ambient": {"lo": [0], "hi": [1]},
  "components": [
    {
      "maps": [
        {"ratio": "1/5", "translation": ["1/5"]},
        {"ratio": "1/5", "translation": ["3/5"]}
      ],
      "probs": [0.5, 0.5]
    },
    {
      "maps": [
        {"ratio": "1/5", "translation": ["1/6"]},
        {"ratio": "1/5", "translation": ["3/6"]}
      ],
      "probs": [0.5, 0.5]
    }
  ],
  "zeta": [0.5, 0.5],
  "r": 1
}
)json";

inline constexpr const char* kExample3 = R"json({
  "dimension": 1,
  "ambient": {"lo": [0], "hi": [1]},
  "components": [
    {
      "maps": [
        {"ratio": 0.2, "translation": [0]},
        {"ratio": 0.2, "translation": [0.7]}
      ],
      "probs": [0.3, 0.7]
    },
    {
      "maps": [
        {"ratio": 0.3, "translation": [0]},
        {"ratio": 0.3, "translation": [0.7]}
      ],
      "probs": [0.3, 0.7]
    }
  ],
  "zeta": [0.5, 0.5],
  "r": 1
}
)json";

inline const char* example_text(int id) {
  switch (id) {
    case 1:
      return kExample1;
    case 2:
      return kExample2;
    case 3:
      return kExample3;
  }
  throw DegenerateInput("unknown example " + std::to_string(id) + " (expected 1, 2 or 3)");
}

inline RifsSpec example(int id) { return parse_spec(example_text(id)); }

}  // namespace fixtures
}  // namespace fquant
