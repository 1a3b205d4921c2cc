#pragma once

// Trimmed snapshot of the public suffix list (ICANN section). Regenerate by
// filtering a full list dump to the rule set below and bumping the version.
// The version string is stamped into every run manifest so results can be
// traced back to the boundary data that produced them.

#include <array>
#include <string_view>

namespace domainscope {

inline constexpr std::string_view kPslSnapshotVersion = "20250115";

inline constexpr std::array<std::string_view, 166> kPslRules = {
    // generic
    "com", "org", "net", "edu", "gov", "mil", "int", "info", "biz", "name",
    "pro", "aero", "asia", "cat", "coop", "jobs", "mobi", "museum", "tel",
    "travel", "xxx", "eu", "io", "tv", "me", "cc",
    // Spain
    "es", "com.es", "nom.es", "org.es", "gob.es", "edu.es",
    // Brazil
    "br", "com.br", "net.br", "org.br", "gov.br", "edu.br", "mil.br",
    "art.br", "blog.br", "eco.br", "emp.br", "ind.br", "inf.br", "radio.br",
    "srv.br", "tv.br",
    // Argentina
    "ar", "com.ar", "edu.ar", "gob.ar", "int.ar", "mil.ar", "net.ar",
    "org.ar",
    // Mexico
    "mx", "com.mx", "org.mx", "gob.mx", "edu.mx", "net.mx",
    // Peru
    "pe", "com.pe", "edu.pe", "gob.pe", "mil.pe", "net.pe", "nom.pe",
    "org.pe",
    // Colombia
    "co", "com.co", "edu.co", "gov.co", "mil.co", "net.co", "nom.co",
    "org.co",
    // Venezuela
    "ve", "com.ve", "co.ve", "edu.ve", "gob.ve", "mil.ve", "net.ve",
    "org.ve", "web.ve",
    // Ecuador
    "ec", "com.ec", "info.ec", "net.ec", "fin.ec", "med.ec", "pro.ec",
    "org.ec", "edu.ec", "gob.ec", "gov.ec", "mil.ec",
    // El Salvador
    "sv", "com.sv", "edu.sv", "gob.sv", "org.sv", "red.sv",
    // Uruguay
    "uy", "com.uy", "edu.uy", "gub.uy", "mil.uy", "net.uy", "org.uy",
    // Chile
    "cl", "gob.cl", "gov.cl", "mil.cl",
    // United Kingdom
    "uk", "ac.uk", "co.uk", "gov.uk", "ltd.uk", "me.uk", "net.uk",
    "nhs.uk", "org.uk", "plc.uk",
    // Australia
    "au", "com.au", "net.au", "org.au", "edu.au", "gov.au", "asn.au",
    "id.au",
    // assorted European / other ccTLDs seen in corporate registries
    "de", "fr", "it", "pt", "nl", "be", "at", "ch", "se", "no", "dk", "fi",
    "ie", "pl", "cz", "us", "ca", "kz", "ru",
    // Japan
    "jp", "co.jp", "or.jp", "ne.jp", "ac.jp", "go.jp",
    // China
    "cn", "com.cn", "net.cn", "org.cn", "gov.cn",
    // wildcard and exception rules
    "*.ck", "!www.ck",
};

}  // namespace domainscope
