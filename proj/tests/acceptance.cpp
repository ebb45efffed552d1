#include <cstdio>

int main() {
    std::fprintf(stderr, "acceptance: criteria not yet implemented\n");
    return 1;
}
