#pragma once
#include <iosfwd>
namespace formation::cli {
int run(int argc, char** argv, std::ostream& out, std::ostream& err);
}
