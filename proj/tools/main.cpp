#include "sggan/version.hpp"

#include <cstdio>

int main() {
    std::printf("sggan %s\n", sggan::kToolkitVersion);
    return 0;
}
