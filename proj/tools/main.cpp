#include "bpdi/harness.hpp"

int main(int argc, char** argv) {
    return bpdi::cli_main(argc, argv);
}
