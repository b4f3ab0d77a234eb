// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ldprof/summary.hpp"

using namespace ldprof;

TEST_CASE("namespace splits at the rightmost separator") {
  CHECK(namespace_of("http://example.org/ns#Foo") == "http://example.org/ns#");
  CHECK(namespace_of("http://example.org/a/b") == "http://example.org/a/");
  CHECK(namespace_of("http://identifiers.org/go/GO:0006915") ==
        "http://identifiers.org/go/GO:");
  CHECK(namespace_of("urn:uuid:abc") == "urn:uuid:");
  CHECK(namespace_of("nosseparator") == "nosseparator");
}

TEST_CASE("uri generalization collapses digit and lowercase runs") {
  CHECK(generalize_uri("http://drugbank.ca/drugs/DB00001") ==
        "http://drugbank.ca/drugs/DB\\d+");
  CHECK(generalize_uri("http://purl.org/obo/owl/GO#GO_0006915") ==
        "http://purl.org/obo/owl/GO#GO_\\d+");
  CHECK(generalize_uri("http://example.org/item/abc123def") ==
        "http://example.org/item/[a-z]+\\d+[a-z]+");
  // the namespace half stays literal even though it contains lowercase runs
  CHECK(generalize_uri("http://bio2rdf.org/mesh:D012345") == "http://bio2rdf.org/mesh:D\\d+");
}

TEST_CASE("lexical shapes map to datatypes") {
  CHECK(lexical_datatype("42") == XSD + "integer");
  CHECK(lexical_datatype("-7") == XSD + "integer");
  CHECK(lexical_datatype("+13") == XSD + "integer");
  CHECK(lexical_datatype("3.14") == XSD + "float");
  CHECK(lexical_datatype("-0.5") == XSD + "float");
  CHECK(lexical_datatype("1e5") == XSD + "float");
  CHECK(lexical_datatype("6.02E+23") == XSD + "float");
  CHECK(lexical_datatype("2021-04-01") == XSD + "date");
  CHECK(lexical_datatype("2021-4-1") == XSD + "string"); // not zero padded
  CHECK(lexical_datatype("hello") == XSD + "string");
  CHECK(lexical_datatype("") == XSD + "string");
  CHECK(lexical_datatype("12abc") == XSD + "string");
  CHECK(lexical_datatype(".") == XSD + "string");
  CHECK(lexical_datatype("-") == XSD + "string");
}

TEST_CASE("summary of plain float literals") {
  // lengths 3,4,7,8,9 -> median 7; all lexically float
  std::vector<Term> vals = {Term::lit("3.5"), Term::lit("12.5"), Term::lit("180.159"),
                            Term::lit("9.241e-3"), Term::lit("123.45678")};
  ValueSummary s = summarize(vals);
  CHECK(s.sample_size == 5);
  CHECK(s.distinct_count == 5);
  CHECK_FALSE(s.is_categorical);
  CHECK(s.inferred_datatype == XSD + "float");
  CHECK(s.median_length == doctest::Approx(7.0));
  CHECK(s.namespaces.empty());
  CHECK(s.uri_patterns.empty());
}

TEST_CASE("declared datatypes outrank lexical guesses") {
  std::vector<Term> vals = {Term::lit_typed("42", XSD + "double"), Term::lit("17"),
                            Term::lit("99")};
  ValueSummary s = summarize(vals);
  // one declared double beats two lexical integers
  CHECK(s.inferred_datatype == XSD + "double");
}

TEST_CASE("language tagged values infer langString") {
  std::vector<Term> vals = {Term::lit_lang("Aspirin", "en"), Term::lit_lang("Aspirine", "fr")};
  ValueSummary s = summarize(vals);
  CHECK(s.inferred_datatype == RDF_LANGSTRING);
}

TEST_CASE("iri samples count namespaces and patterns, no datatype") {
  std::vector<Term> vals;
  for (int i = 0; i < 4; ++i)
    vals.push_back(Term::iri("http://drugbank.ca/drugs/DB0000" + std::to_string(i)));
  vals.push_back(Term::iri("http://bio2rdf.org/mesh:D000001"));
  ValueSummary s = summarize(vals);
  CHECK_FALSE(s.inferred_datatype.has_value());
  CHECK(s.namespaces.at("http://drugbank.ca/drugs/") == 4);
  CHECK(s.namespaces.at("http://bio2rdf.org/mesh:") == 1);
  CHECK(s.uri_patterns.at("http://drugbank.ca/drugs/DB\\d+") == 4);
  CHECK(s.uri_patterns.at("http://bio2rdf.org/mesh:D\\d+") == 1);
}

TEST_CASE("categorical flag follows the distinct ratio") {
  std::vector<Term> vals;
  for (int i = 0; i < 100; ++i) vals.push_back(Term::lit("v" + std::to_string(i % 10)));
  ValueSummary ten = summarize(vals); // 10/100 = 0.1, inclusive boundary
  CHECK(ten.is_categorical);

  vals.push_back(Term::lit("one more"));
  ValueSummary eleven = summarize(vals); // 11/101 > 0.1
  CHECK_FALSE(eleven.is_categorical);

  // threshold is a parameter
  CHECK(summarize(vals, 0.2).is_categorical);
}

TEST_CASE("median over an even count averages the middle pair") {
  std::vector<Term> vals = {Term::lit("abcd"), Term::lit("abcdef")};
  CHECK(summarize(vals).median_length == doctest::Approx(5.0));
}

TEST_CASE("empty sample yields an empty summary") {
  ValueSummary s = summarize({});
  CHECK(s.sample_size == 0);
  CHECK(s.distinct_count == 0);
  CHECK_FALSE(s.inferred_datatype.has_value());
  CHECK(s.median_length == doctest::Approx(0.0));
}

TEST_CASE("mixed iri and literal samples are summarized together") {
  std::vector<Term> vals = {Term::iri("http://x.org/a"), Term::lit("42"), Term::lit("43")};
  ValueSummary s = summarize(vals);
  CHECK(s.namespaces.size() == 1);
  CHECK(s.inferred_datatype == XSD + "integer");
  CHECK(s.sample_size == 3);
}
