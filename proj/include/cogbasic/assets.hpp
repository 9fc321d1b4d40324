#pragma once

#include <string_view>

// Text files compiled into the library (see cmake/embed.cmake).
namespace cogbasic::assets {

std::string_view lexicon_negations();
std::string_view lexicon_absolute();
std::string_view lexicon_qualified();
std::string_view lexicon_verbs();
std::string_view lexicon_sequence();
std::string_view lexicon_modals();
std::string_view lexicon_conditionals();
std::string_view lexicon_determiners();
std::string_view lexicon_copulas();
std::string_view lexicon_abbreviations();
std::string_view category_color();
std::string_view category_day();
std::string_view category_month();
std::string_view category_direction();
std::string_view category_season();

std::string_view suite_v1();
std::string_view interpreter_file_v1();
std::string_view conflict_resolution_program();

}  // namespace cogbasic::assets
