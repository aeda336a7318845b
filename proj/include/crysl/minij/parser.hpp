#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "crysl/minij/ast.hpp"

namespace crysl::minij {

// Parses and checks a MiniJ program (grammar in docs/minij.md).
// Errors: Syntax, DuplicateDeclaration (variable, parameter or function
// declared twice), UndefinedFunction, UseBeforeDef (a variable read on some
// path before it is assigned, or never declared), MissingMain.
Program parseProgram(std::string_view text, const std::string& file = "<input>");
Program readProgramFile(const std::filesystem::path& path);

}  // namespace crysl::minij
