#pragma once

namespace diamag {

struct SeriesResult {
  double value = 0.0;
  double tail_bound = 0.0;
  int terms = 0;
};

}  // namespace diamag
