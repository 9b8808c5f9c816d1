#!/usr/bin/env python3
"""Writes data/inflections-en.tminf (irregular noun plurals, uninflected nouns, article exceptions)."""
import pathlib
import sys

PAIRS = """
man men|woman women|child children|ox oxen|foot feet|tooth teeth|goose geese|mouse mice|louse lice|person people
die dice|brother brethren|dogma dogmata|stigma stigmata|schema schemata|lemma lemmata|stoma stomata|miasma miasmata
enigma enigmata|anathema anathemata|carcinoma carcinomata|edema edemata|trauma traumata|sarcoma sarcomata
criterion criteria|phenomenon phenomena|automaton automata|polyhedron polyhedra|ganglion ganglia|prolegomenon prolegomena
datum data|medium media|stratum strata|memorandum memoranda|curriculum curricula|bacterium bacteria|millennium millennia
addendum addenda|erratum errata|symposium symposia|ovum ova|quantum quanta|maximum maxima|minimum minima|optimum optima
spectrum spectra|referendum referenda|consortium consortia|aquarium aquaria|stadium stadia|crematorium crematoria
emporium emporia|moratorium moratoria|podium podia|sanatorium sanatoria|agendum agenda|candelabrum candelabra
cactus cacti|focus foci|fungus fungi|nucleus nuclei|radius radii|stimulus stimuli|syllabus syllabi|alumnus alumni
locus loci|bacillus bacilli|magus magi|hippopotamus hippopotami|terminus termini|octopus octopodes|incubus incubi
succubus succubi|thesaurus thesauri|torus tori|modulus moduli|calculus calculi|genius genii|umbilicus umbilici
genus genera|corpus corpora|opus opera|viscus viscera|foetus foetuses|fetus fetuses|campus campuses|virus viruses
analysis analyses|axis axes|basis bases|crisis crises|diagnosis diagnoses|ellipsis ellipses|hypothesis hypotheses
oasis oases|parenthesis parentheses|synopsis synopses|thesis theses|emphasis emphases|neurosis neuroses
paralysis paralyses|prognosis prognoses|synthesis syntheses|metamorphosis metamorphoses|nemesis nemeses
psychosis psychoses|thrombosis thromboses|catharsis catharses|antithesis antitheses|arthritis arthritides
appendix appendices|index indices|matrix matrices|vertex vertices|apex apices|codex codices|cortex cortices
helix helices|vortex vortices|simplex simplices|radix radices|calyx calyces|matrix matrices|murex murices
larva larvae|alga algae|antenna antennae|formula formulae|vertebra vertebrae|nebula nebulae|alumna alumnae
amoeba amoebae|supernova supernovae|persona personae|aurora aurorae|cornea corneae|retina retinae|hypha hyphae
bureau bureaux|chateau chateaux|plateau plateaux|tableau tableaux|beau beaux|gateau gateaux|portmanteau portmanteaux
hero heroes|potato potatoes|tomato tomatoes|echo echoes|veto vetoes|torpedo torpedoes|embargo embargoes
mosquito mosquitoes|volcano volcanoes|tornado tornadoes|domino dominoes|cargo cargoes|buffalo buffaloes
mango mangoes|motto mottoes|grotto grottoes|innuendo innuendoes|desperado desperadoes|tuxedo tuxedos
piano pianos|photo photos|radio radios|video videos|studio studios|zoo zoos|kangaroo kangaroos|memo memos
solo solos|kilo kilos|logo logos|casino casinos|cello cellos|disco discos|euro euros|halo halos|hippo hippos
knife knives|wife wives|life lives|leaf leaves|loaf loaves|wolf wolves|calf calves|half halves|shelf shelves
thief thieves|elf elves|self selves|sheaf sheaves|scarf scarves|hoof hooves|dwarf dwarves|midwife midwives
housewife housewives|penknife penknives|jackknife jackknives|werewolf werewolves|bookshelf bookshelves
roof roofs|chief chiefs|belief beliefs|proof proofs|chef chefs|cliff cliffs|reef reefs|safe safes|grief griefs
giraffe giraffes|gulf gulfs|surf surfs|turf turfs|staff staffs|sheriff sheriffs|handkerchief handkerchiefs
human humans|german germans|shaman shamans|talisman talismans|caiman caimans|ottoman ottomans|roman romans
walkman walkmans|doberman dobermans|cayman caymans|dolman dolmans
penny pence|cherub cherubim|seraph seraphim|kibbutz kibbutzim|libretto libretti|virtuoso virtuosi|tempo tempi
graffito graffiti|paparazzo paparazzi|concerto concerti|soprano soprani|solo solos|alto altos|basso bassi
quiz quizzes|fez fezzes|whiz whizzes|gas gases|bus buses|lens lenses|atlas atlases|canvas canvases|iris irises
bonus bonuses|census censuses|chorus choruses|circus circuses|status statuses|apparatus apparatuses|prospectus prospectuses
sinus sinuses|walrus walruses|octopus octopodes|plus pluses|minus minuses|bias biases|alias aliases|crocus crocuses
genie genies|movie movies|cookie cookies|calorie calories|prairie prairies|rookie rookies|zombie zombies|pie pies
tie ties|lie lies|die dice|foe foes|toe toes|shoe shoes|canoe canoes|oboe oboes
ox oxen|oxymoron oxymora|passerby passersby|mother-in-law mothers-in-law|father-in-law fathers-in-law
son-in-law sons-in-law|daughter-in-law daughters-in-law|brother-in-law brothers-in-law|sister-in-law sisters-in-law
commander-in-chief commanders-in-chief|attorney-general attorneys-general|court-martial courts-martial
man-of-war men-of-war|runner-up runners-up|passer-by passers-by|hanger-on hangers-on
menu menus|emu emus|gnu gnus|guru gurus|tutu tutus|haiku haikus|tofu tofus|bayou bayous|tabu tabus|zebu zebus
taxi taxis|ski skis|alibi alibis|bikini bikinis|safari safaris|kiwi kiwis|wiki wikis|tsunami tsunamis|salami salamis
martini martinis|khaki khakis|yeti yetis|chili chilis|semi semis|mini minis|sari saris|maxi maxis|deli delis
hindu hindus|israeli israelis|pakistani pakistanis|iraqi iraqis|somali somalis
""".strip()

UNINFLECTED = """
sheep deer fish series species aircraft spacecraft hovercraft watercraft moose swine salmon trout bison cod
offspring means headquarters corps chassis elk squid grouse shrimp mackerel haddock halibut pike tuna carp
barracks crossroads gallows innings kudos rendezvous precis faux-pas
""".split()

# Words whose initial letter misleads the article rule.
AN_PREFIXES = "hour honest honor honour heir herb unin unim unid unint x-ray mba fbi".split()
A_PREFIXES = "one once uni use usa usu uti ure euro eul eu ewe ufo uk unanim".split()


def main(out_path):
    seen = set()
    pairs = []
    for chunk in PAIRS.replace("\n", "|").split("|"):
        chunk = chunk.strip()
        if not chunk:
            continue
        singular, plural = chunk.split()
        if singular in seen:
            continue
        seen.add(singular)
        pairs.append((singular, plural))
    lines = [
        "TMINF1",
        "# English noun inflection lexicon.",
        "# plural <singular> <plural>  irregular or classical plural form",
        "# uninflected <word>           same form in singular and plural",
        "# an <prefix>                  words starting with prefix take 'an'",
        "# a <prefix>                   words starting with prefix take 'a'",
    ]
    lines += [f"plural {s} {p}" for s, p in pairs]
    lines += [f"uninflected {w}" for w in UNINFLECTED]
    lines += [f"an {w}" for w in AN_PREFIXES]
    lines += [f"a {w}" for w in A_PREFIXES]
    pathlib.Path(out_path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"{len(pairs)} pairs, {len(UNINFLECTED)} uninflected")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/inflections-en.tminf")
