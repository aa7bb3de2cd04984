#include <grasp/cli.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    return grasp::cli::dispatch(argc, argv, std::cout, std::cerr);
}
