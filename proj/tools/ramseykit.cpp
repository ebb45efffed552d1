#include <cstdio>
#include <cstring>

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i)
        if (!std::strcmp(argv[i], "--help") || !std::strcmp(argv[i], "-h")) {
            std::printf("usage: ramseykit <subcommand> [options]\n");
            std::printf("subcommands are not wired up yet\n");
            return 0;
        }
    std::fprintf(stderr, "ramseykit: not yet wired up (try --help)\n");
    return 2;
}
