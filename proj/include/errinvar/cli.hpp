#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "errinvar/localpoly.hpp"

namespace errinvar {

// Exit codes: 0 success, 2 argument error, 3 data error, 4 estimator error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Reads w,y[,w1,w2] (positional, or by header names w, y, w1, w2).
Sample read_sample_csv(const std::string& path);
// Reads a two-column (time, response) file such as the motorcycle data.
Sample read_xy_csv(const std::string& path);

}  // namespace errinvar
