#!/usr/bin/env python3
# Copyright 2026 The cccgen Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the committed `parmigiano` fixture.

A small Italian-wiki snapshot around one Parmigiano Reggiano article with
known evidence everywhere: 141 inlinks of which 122 come from reliably-CCC
pages and 3 from abroad-geolocated ones, 739 outlinks of which 206 reach CCC
and 9 abroad, a category one hop above the article that matches the lexicon,
and Wikidata claims for country and location. The numbers are load-bearing
for the test suite; regenerate only together with the tests.
"""

import json
import os
import sys

PARMIGIANO = 1
INLINK_GEO = range(2, 63)        # 61 sources geotagged in Italy
INLINK_COUNTRY = range(63, 124)  # 61 sources with P17 -> Q38
INLINK_ABROAD = range(124, 127)  # 3 sources geotagged in Czechia
INLINK_PLAIN = range(127, 143)   # 16 sources with no signal
OUTLINK_GEO = range(143, 246)    # 103 targets geotagged in Italy
OUTLINK_COUNTRY = range(246, 349)  # 103 targets with P17 -> Q38
OUTLINK_ABROAD = range(349, 358)   # 9 targets geotagged in Czechia
OUTLINK_PLAIN = range(358, 882)    # 524 targets with no signal

SITELINK_WIKIS = [
    "arwiki", "astwiki", "azwiki", "bewiki", "bgwiki", "bnwiki", "cawiki",
    "cswiki", "cywiki", "dawiki", "dewiki", "elwiki", "enwiki", "eowiki",
    "eswiki", "etwiki", "euwiki", "fawiki", "fiwiki", "frwiki", "glwiki",
    "hewiki", "hiwiki", "hrwiki", "huwiki", "hywiki", "idwiki", "itwiki",
    "jawiki", "kawiki", "kkwiki", "kowiki", "lawiki", "ltwiki", "lvwiki",
    "mkwiki", "mswiki", "nlwiki", "nnwiki", "nowiki", "plwiki", "ptwiki",
    "rowiki", "ruwiki", "shwiki", "simplewiki", "skwiki", "slwiki", "srwiki",
    "svwiki", "tawiki", "tewiki", "thwiki", "trwiki", "ukwiki", "urwiki",
    "viwiki", "warwiki", "zhwiki",
]

NEUTRAL_CLAIMS = {
    "P31": ["Q3089219"],
    "P279": ["Q10943"],
    "P18": ["Q94599450"],
    "P373": ["Q55673489"],
    "P646": ["Q19359034"],
    "P910": ["Q8953981"],
    "P1343": ["Q602358"],
    "P1424": ["Q6553136"],
    "P2347": ["Q51955019"],
    "P3417": ["Q50825883"],
    "P4212": ["Q59216517"],
    "P5055": ["Q61716794"],
    "P6573": ["Q64179234"],
    "P8408": ["Q86999554"],
}

ATLAS_ROWS = [
    ("it", "Q38", "IT", "", "italia;italian;italy;italiana;italiano"),
    ("it", "Q237", "VA", "", "vaticano;vatican"),
    ("it", "Q238", "SM", "", "san marino;sammarinese"),
    ("it", "Q12724", "CH", "CH-TI", "ticino;ticinese"),
    ("it", "Q129657", "HR", "HR-18", "istria;istriana"),
    ("it", "Q15882", "SI", "SI-090", "pirano"),
    ("it", "Q15887", "SI", "SI-040", "izola"),
    ("cs", "Q213", "CZ", "", "cesko;czech;czechia;ceska"),
    ("de", "Q183", "DE", "", "deutschland;german;germany"),
    ("de", "Q12724", "CH", "CH-TI", "ticino"),
]

LANGUAGE_CELLS = {
    "it": ("Q652", "italian;italiano"),
    "cs": ("Q9056", "czech;cesky"),
    "de": ("Q188", "german;deutsch"),
}


def page(page_id, title, qitem=""):
    return {
        "page_id": page_id,
        "title": title,
        "qitem": qitem,
        "namespace": 0,
        "date_created": 10000 * (2002 + page_id % 18)
        + 100 * (1 + page_id % 12)
        + (1 + page_id % 28),
        "bytes": 1000 + page_id,
        "references": page_id % 20,
        "edits": 10 + page_id % 50,
        "editors": 1 + page_id % 10,
        "discussions": page_id % 5,
        "pageviews": 100 + page_id,
        "featured": 1 if page_id in (2, 143) else 0,
    }


def italy_geotag(page_id):
    return {"page_id": page_id, "lat": 41.0 + (page_id % 50) * 0.1,
            "lon": 9.0 + (page_id % 40) * 0.1}


def czech_geotag(page_id):
    return {"page_id": page_id, "lat": 49.0 + (page_id % 10) * 0.1,
            "lon": 14.0 + (page_id % 20) * 0.1}


def country_qitem(page_id):
    return f"Q{100000 + page_id}"


def build():
    pages = []
    geotags = []
    entities = []

    parmigiano = page(PARMIGIANO, "Parmigiano_Reggiano", "Q155922")
    parmigiano.update(date_created=20040913, bytes=13815, references=16,
                      edits=471, editors=268, discussions=16, pageviews=639,
                      featured=0)
    pages.append(parmigiano)

    claims = {"P495": ["Q38"], "P1071": ["Q1263", "Q16228"]}
    claims.update(NEUTRAL_CLAIMS)
    sitelinks = {wiki: "Parmigiano Reggiano" for wiki in SITELINK_WIKIS}
    sitelinks["plwiki"] = "Parmezan"
    entities.append({"qitem": "Q155922", "claims": claims, "sitelinks": sitelinks})
    entities.append({"qitem": "Q1263", "claims": {"P131": ["Q38"]}, "sitelinks": {}})
    entities.append({"qitem": "Q16228", "claims": {"P131": ["Q1263"]}, "sitelinks": {}})

    for i in INLINK_GEO:
        pages.append(page(i, f"Italian_town_{i}"))
        geotags.append(italy_geotag(i))
    for i in INLINK_COUNTRY:
        pages.append(page(i, f"Italian_subject_{i}", country_qitem(i)))
        claims = {"P17": ["Q38"]}
        if i == 63:
            claims["P21"] = ["Q6581072"]
        if i == 64:
            claims["P21"] = ["Q6581097"]
        entities.append({"qitem": country_qitem(i), "claims": claims, "sitelinks": {}})
    for i in INLINK_ABROAD:
        pages.append(page(i, f"Czech_place_{i}"))
        geotags.append(czech_geotag(i))
    for i in INLINK_PLAIN:
        pages.append(page(i, f"Article_{i}"))
    for i in OUTLINK_GEO:
        pages.append(page(i, f"Italian_site_{i}"))
        geotags.append(italy_geotag(i))
    for i in OUTLINK_COUNTRY:
        pages.append(page(i, f"Italian_topic_{i}", country_qitem(i)))
        entities.append({"qitem": country_qitem(i), "claims": {"P17": ["Q38"]},
                         "sitelinks": {}})
    for i in OUTLINK_ABROAD:
        pages.append(page(i, f"Czech_site_{i}"))
        geotags.append(czech_geotag(i))
    for i in OUTLINK_PLAIN:
        pages.append(page(i, f"Page_{i}"))

    links = [{"from": i, "to": PARMIGIANO}
             for r in (INLINK_GEO, INLINK_COUNTRY, INLINK_ABROAD, INLINK_PLAIN)
             for i in r]
    links += [{"from": PARMIGIANO, "to": i}
              for r in (OUTLINK_GEO, OUTLINK_COUNTRY, OUTLINK_ABROAD, OUTLINK_PLAIN)
              for i in r]

    categories = [{"cat_id": 9001, "title": "Italian_cheeses"},
                  {"cat_id": 9002, "title": "Cheeses"}]
    category_edges = [
        {"parent": 9002, "child": 9001, "child_kind": "category"},
        {"parent": 9001, "child": PARMIGIANO, "child_kind": "article"},
    ]

    return pages, links, categories, category_edges, geotags, entities


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as out:
        for row in rows:
            out.write(json.dumps(row, ensure_ascii=False) + "\n")


def main():
    root = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(os.path.abspath(__file__)), "..", "..", "fixtures")
    root = os.path.normpath(root)
    snapshot_dir = os.path.join(root, "parmigiano")
    os.makedirs(snapshot_dir, exist_ok=True)

    with open(os.path.join(root, "atlas.csv"), "w", encoding="utf-8") as out:
        out.write("language,qitem,iso3166,iso31662,keywords,language_qitems,"
                  "language_keywords\n")
        for language, qitem, iso1, iso2, keywords in ATLAS_ROWS:
            language_qitems, language_keywords = LANGUAGE_CELLS[language]
            out.write(f"{language},{qitem},{iso1},{iso2},{keywords},"
                      f"{language_qitems},{language_keywords}\n")

    boundaries = [
        {"qitem": "Q38",
         "polygons": [[[36.0, 6.0], [36.0, 19.0], [47.0, 19.0], [47.0, 6.0]]]},
        {"qitem": "Q213",
         "polygons": [[[48.5, 12.0], [48.5, 19.0], [51.0, 19.0], [51.0, 12.0]]]},
    ]
    write_jsonl(os.path.join(root, "boundaries.jsonl"), boundaries)

    pages, links, categories, category_edges, geotags, entities = build()
    write_jsonl(os.path.join(snapshot_dir, "pages.jsonl"), pages)
    write_jsonl(os.path.join(snapshot_dir, "links.jsonl"), links)
    write_jsonl(os.path.join(snapshot_dir, "categories.jsonl"), categories)
    write_jsonl(os.path.join(snapshot_dir, "category_edges.jsonl"), category_edges)
    write_jsonl(os.path.join(snapshot_dir, "geotags.jsonl"), geotags)
    write_jsonl(os.path.join(snapshot_dir, "wikidata.jsonl"), entities)
    print(f"wrote fixture under {root}")


if __name__ == "__main__":
    main()
