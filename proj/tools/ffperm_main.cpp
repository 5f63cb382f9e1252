#include <cstdio>

#include "ffperm/gf.hpp"

int main() {
    std::puts("ffperm CLI placeholder");
    return 0;
}
