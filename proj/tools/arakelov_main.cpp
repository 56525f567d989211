#include <cstdio>

// placeholder until the subcommand layer lands; replaced by the real CLI
int main() {
    std::puts("arakelov: CLI not wired up yet");
    return 2;
}
