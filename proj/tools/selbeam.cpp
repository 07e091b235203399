// SPDX-License-Identifier: Apache-2.0

#include "selbeam/harness.hpp"

int main(int argc, char** argv) { return selbeam::cli_main(argc, argv); }
