#include "qimg/cli.hpp"

#include <cstdio>

namespace qimg {

int run_cli(int, char**) {
    std::fputs("qimg: not wired up yet\n", stderr);
    return 2;
}

}  // namespace qimg
