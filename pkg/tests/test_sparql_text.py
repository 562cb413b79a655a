import pytest

from pkgraph import (
    DeleteWhereQuery,
    InsertDataQuery,
    Iri,
    Literal,
    Quad,
    QueryParseError,
    SelectQuery,
    TriplePattern,
    Variable,
    parse_query,
    query_to_text,
)
from pkgraph.terms import RDF_STATEMENT, RDF_TYPE
from generators import OWNER

EX = "http://example.org/"


def test_parse_select_with_filter():
    text = """
    PREFIX ex: <http://example.org/>
    select ?st ?o
    WHERE {
        ?st a rdf:Statement .
        ?st ex:p ?o .
        FILTER(?o = ex:thing)
    }
    """
    query = parse_query(text, default_graph=OWNER)
    assert isinstance(query, SelectQuery)
    assert query.projected == ("st", "o")
    assert query.graph == OWNER
    assert query.patterns[0] == TriplePattern(Variable("st"), RDF_TYPE, RDF_STATEMENT)
    assert query.filters == (("o", Iri(EX + "thing")),)


def test_keywords_are_case_insensitive_and_whitespace_free_form():
    one_liner = 'SeLeCt ?s wHeRe{?s a rdf:Statement.}'
    query = parse_query(one_liner, default_graph=OWNER)
    assert isinstance(query, SelectQuery)
    assert query.projected == ("s",)


def test_parse_insert_data_with_graph():
    text = (
        f'INSERT DATA {{ GRAPH <{OWNER.value}> {{ '
        f'<{EX}s> <{EX}p> "v" . <{EX}s> a rdf:Statement }} }}'
    )
    query = parse_query(text)
    assert isinstance(query, InsertDataQuery)
    assert Quad(OWNER, Iri(EX + "s"), Iri(EX + "p"), Literal("v")) in query.quads
    assert Quad(OWNER, Iri(EX + "s"), RDF_TYPE, RDF_STATEMENT) in query.quads


def test_parse_delete_where():
    text = f'delete where {{ graph <{OWNER.value}> {{ <{EX}s> ?p ?o }} }}'
    query = parse_query(text)
    assert isinstance(query, DeleteWhereQuery)
    assert query.graph == OWNER
    assert query.patterns == (TriplePattern(Iri(EX + "s"), Variable("p"), Variable("o")),)


def test_insert_data_rejects_variables():
    text = f'INSERT DATA {{ GRAPH <{OWNER.value}> {{ ?s <{EX}p> "v" }} }}'
    with pytest.raises(QueryParseError):
        parse_query(text)


def test_select_without_graph_context_fails():
    with pytest.raises(QueryParseError):
        parse_query("SELECT ?s WHERE { ?s ?p ?o }")


def test_star_projection_is_not_in_the_subset():
    with pytest.raises(QueryParseError):
        parse_query("SELECT * WHERE { ?s ?p ?o }", default_graph=OWNER)


def test_error_carries_line_and_column():
    with pytest.raises(QueryParseError) as err:
        parse_query("SELECT ?s\nWHERE { ?s ?p }", default_graph=OWNER)
    assert err.value.line == 2


@pytest.mark.parametrize(
    "query",
    [
        SelectQuery(
            projected=("s", "o"),
            graph=OWNER,
            patterns=(
                TriplePattern(Variable("s"), RDF_TYPE, RDF_STATEMENT),
                TriplePattern(Variable("s"), Iri(EX + "p"), Variable("o")),
            ),
            filters=(("o", Literal("x")),),
        ),
        InsertDataQuery(
            (
                Quad(OWNER, Iri(EX + "s"), Iri(EX + "p"), Literal("hello\nthere")),
                Quad(OWNER, Iri(EX + "s"), RDF_TYPE, RDF_STATEMENT),
            )
        ),
        DeleteWhereQuery(
            OWNER, (TriplePattern(Iri(EX + "s"), Variable("p"), Variable("o")),)
        ),
    ],
)
def test_query_to_text_round_trips_through_the_parser(query):
    text = query_to_text(query)
    parsed = parse_query(text, default_graph=OWNER)
    if isinstance(query, InsertDataQuery):
        assert set(parsed.quads) == set(query.quads)
    elif isinstance(query, DeleteWhereQuery):
        assert parsed == query
    else:
        assert parsed.projected == query.projected
        assert set(parsed.patterns) == set(query.patterns)
        assert set(parsed.filters) == set(query.filters)
