#include "mdens/cli.hpp"

int main(int argc, char** argv) { return mdens::cli_main(argc, argv); }
