// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#include "cli.hpp"

int main(int argc, char** argv) { return cogmimo::cli::run_main(argc, argv); }
