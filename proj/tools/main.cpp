#include "asymlink/cli_app.hpp"

int main(int argc, char** argv) { return asymlink::cli_main(argc, argv); }
