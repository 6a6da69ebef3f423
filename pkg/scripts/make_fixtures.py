#!/usr/bin/env python3
"""Regenerate the bundled fixture corpus and translations under data/.

The corpus is 1,000 synthetic SMS-style English sentences built from a
phrasebook plus template frames; the translation fixture maps each
sentence to a Hindi (Devanagari) and a Russian (Cyrillic) rendering
composed word-by-word from a small bilingual lexicon. The renderings
are crude as translations go, but that is irrelevant here: they exist
to be transliterated, and their romanizations carry the right character
statistics for each language.

Every generated native-script string is checked to romanize cleanly
through the shipped tables before it is written.

Usage: python scripts/make_fixtures.py [--out-dir data]
"""

from __future__ import annotations

import argparse
import random
import unicodedata
from pathlib import Path

import sys

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from rlid.translit import builtin_table, transliterate, validate_latin  # noqa: E402

SEED = 20240601
TARGET_SENTENCES = 1000

# (english, hindi, russian)
PHRASEBOOK = [
    ("how are you", "आप कैसे हो", "как дела"),
    ("hello", "नमस्ते", "привет"),
    ("good morning", "सुप्रभात", "доброе утро"),
    ("good evening", "शुभ संध्या", "добрый вечер"),
    ("good night", "शुभ रात्रि", "спокойной ночи"),
    ("thank you very much", "बहुत धन्यवाद", "большое спасибо"),
    ("see you tomorrow", "कल मिलेंगे", "увидимся завтра"),
    ("what is your name", "तुम्हारा नाम क्या है", "как тебя зовут"),
    ("i am fine", "मैं ठीक हूँ", "я в порядке"),
    ("where are you", "तुम कहाँ हो", "ты где"),
    ("i am at home", "मैं घर पर हूँ", "я дома"),
    ("call me later", "मुझे बाद में फ़ोन करो", "позвони мне позже"),
    ("i love you", "मैं तुमसे प्यार करता हूँ", "я тебя люблю"),
    ("happy birthday", "जन्मदिन मुबारक", "с днём рождения"),
    ("congratulations", "बधाई हो", "поздравляю"),
    ("welcome", "स्वागत है", "добро пожаловать"),
    ("sorry i am late", "माफ़ करना मुझे देर हो गई", "извини я опоздал"),
    ("no problem", "कोई बात नहीं", "без проблем"),
    ("see you soon", "जल्दी मिलेंगे", "до скорого"),
    ("good luck", "शुभकामनाएं", "удачи"),
    ("be careful", "सावधान रहो", "будь осторожен"),
    ("i am hungry", "मुझे भूख लगी है", "я голоден"),
    ("i am tired", "मैं थक गया हूँ", "я устал"),
    ("let us go", "चलो चलें", "пойдём"),
    ("come here", "यहाँ आओ", "иди сюда"),
    ("sit down", "बैठ जाओ", "садись"),
    ("wait for me", "मेरा इंतज़ार करो", "подожди меня"),
    ("do not worry", "चिंता मत करो", "не волнуйся"),
    ("i do not know", "मुझे नहीं पता", "я не знаю"),
    ("i understand", "मैं समझता हूँ", "я понимаю"),
    ("what happened", "क्या हुआ", "что случилось"),
    ("everything is fine", "सब ठीक है", "всё хорошо"),
    ("it is very hot today", "आज बहुत गर्मी है", "сегодня очень жарко"),
    ("it is cold outside", "बाहर ठंड है", "на улице холодно"),
    ("i will call you tomorrow", "मैं कल फ़ोन करूंगा", "я позвоню тебе завтра"),
    ("are you coming", "क्या तुम आ रहे हो", "ты идёшь"),
    ("yes of course", "हाँ बिल्कुल", "да конечно"),
    ("maybe later", "शायद बाद में", "может позже"),
    ("not now", "अभी नहीं", "не сейчас"),
    ("where is the bus stop", "बस स्टॉप कहाँ है", "где автобусная остановка"),
    ("how are you all", "आप सब कैसे हो", "как вы"),
    ("how is it going", "कैसा चल रहा है", "как идут дела"),
    ("what are you doing", "तुम क्या कर रहे हो", "что делаешь"),
    ("how was your day", "तुम्हारा दिन कैसा था", "как прошёл день"),
    ("everything is good", "सब अच्छा है", "всё в порядке"),
    ("okay then", "ठीक है फिर", "ну ладно"),
    ("bye", "अलविदा", "пока"),
    ("see you", "फिर मिलेंगे", "до встречи"),
    ("good afternoon", "नमस्कार", "добрый день"),
    ("thanks", "धन्यवाद", "спасибо"),
    ("thank you my friend", "धन्यवाद मेरे दोस्त", "спасибо мой друг"),
    ("what is new", "क्या नया है", "что нового"),
    ("all good", "सब ठीक", "всё нормально"),
    ("where were you", "तुम कहाँ थे", "где ты был"),
    ("i am going home", "मैं घर जा रहा हूँ", "я иду домой"),
    ("i am coming", "मैं आ रहा हूँ", "я иду"),
    ("wait a minute", "एक मिनट रुको", "подожди минуту"),
    ("call me now", "मुझे अभी फ़ोन करो", "позвони мне сейчас"),
    ("i am busy", "मैं व्यस्त हूँ", "я занят"),
    ("are you free today", "क्या तुम आज खाली हो", "ты свободен сегодня"),
    ("i will be late", "मुझे देर होगी", "я опоздаю"),
    ("do not be late", "देर मत करना", "не опаздывай"),
    ("where do you live", "तुम कहाँ रहते हो", "где ты живёшь"),
    ("i live here", "मैं यहाँ रहता हूँ", "я живу здесь"),
    ("come home soon", "जल्दी घर आओ", "приходи домой скорее"),
    ("i am on my way", "मैं रास्ते में हूँ", "я уже в пути"),
    ("talk to you later", "बाद में बात करेंगे", "поговорим позже"),
    ("good idea", "अच्छा विचार", "хорошая идея"),
    ("very good", "बहुत अच्छा", "очень хорошо"),
    ("how much is this", "यह कितने का है", "сколько это стоит"),
    ("this is very expensive", "यह बहुत महंगा है", "это очень дорого"),
    ("what time is it", "क्या समय हुआ है", "который час"),
    ("i am here", "मैं यहाँ हूँ", "я здесь"),
    ("it is raining", "बारिश हो रही है", "идёт дождь"),
    ("the weather is nice", "मौसम अच्छा है", "погода хорошая"),
    ("how are things", "कैसा हाल है", "как твои дела"),
    ("how is everyone", "सब कैसे हैं", "как все"),
    ("things are going well", "सब काम ठीक चल रहा है", "дела идут хорошо"),
    ("no news", "कोई ख़बर नहीं", "новостей нет"),
    ("how are you doing", "तुम कैसे हो", "как ты"),
    ("how are you brother", "कैसे हो भाई", "как ты брат"),
    ("how are you friend", "कैसे हो दोस्त", "как ты друг"),
    ("how are you these days", "आजकल कैसे हो", "как у тебя дела"),
    ("how is it", "कैसा है", "как оно"),
    ("where are you sir", "आप कहाँ हो", "вы где"),
    ("what are you doing sir", "आप क्या कर रहे हो", "что вы делаете"),
    ("when will you come", "आप कब आओगे", "когда вы придёте"),
    ("are you okay", "आप ठीक हो", "ты в порядке"),
    ("come soon sir", "आप जल्दी आओ", "приходите скорее"),
]

# short "how is X" exchanges; for people the Russian side uses the
# idiomatic "how are X's things" phrasing
HOW_IS_THINGS = [
    ("work", "काम", "работа"),
    ("the weather", "मौसम", "погода"),
    ("life", "ज़िंदगी", "жизнь"),
    ("the movie", "फ़िल्म", "фильм"),
    ("the house", "घर", "дом"),
    ("the city", "शहर", "город"),
    ("school", "स्कूल", "школа"),
]

HOW_IS_PEOPLE = [
    ("mom", "माँ", "мамы"),
    ("dad", "पापा", "папы"),
    ("the family", "परिवार", "семьи"),
    ("your brother", "भाई", "брата"),
    ("your sister", "बहन", "сестры"),
    ("your friend", "दोस्त", "друга"),
]

SUBJECTS = [
    ("i", "मैं", "я"),
    ("you", "तुम", "ты"),
    ("we", "हम", "мы"),
    ("they", "वे", "они"),
    ("he", "वह", "он"),
    ("she", "वह", "она"),
    ("my friend", "मेरा दोस्त", "мой друг"),
    ("my brother", "मेरा भाई", "мой брат"),
    ("my sister", "मेरी बहन", "моя сестра"),
    ("everyone", "सब लोग", "все"),
]

# future-tense frame verbs: (en, hindi future, russian future)
VERBS_FUTURE = [
    ("buy", "खरीदेंगे", "купит"),
    ("see", "देखेंगे", "увидит"),
    ("bring", "लाएंगे", "принесёт"),
    ("make", "बनाएंगे", "сделает"),
    ("send", "भेजेंगे", "отправит"),
    ("read", "पढ़ेंगे", "прочитает"),
    ("write", "लिखेंगे", "напишет"),
    ("find", "खोजेंगे", "найдёт"),
    ("take", "लेंगे", "возьмёт"),
    ("give", "देंगे", "даст"),
]

# imperative frame verbs: (en, hindi imperative, russian imperative)
VERBS_IMPERATIVE = [
    ("bring", "लाओ", "принеси"),
    ("buy", "खरीदो", "купи"),
    ("send", "भेजो", "отправь"),
    ("make", "बनाओ", "сделай"),
    ("read", "पढ़ो", "прочитай"),
    ("take", "लो", "возьми"),
    ("give", "दो", "дай"),
]

# past frame verbs: (en, hindi past, russian past)
VERBS_PAST = [
    ("buy", "खरीदा", "купил"),
    ("see", "देखा", "видел"),
    ("find", "खोजा", "нашёл"),
    ("read", "पढ़ा", "читал"),
    ("send", "भेजा", "отправил"),
]

# objects: (en, hindi, russian nominative, russian accusative)
OBJECTS = [
    ("bread", "रोटी", "хлеб", "хлеб"),
    ("water", "पानी", "вода", "воду"),
    ("food", "खाना", "еда", "еду"),
    ("tea", "चाय", "чай", "чай"),
    ("the book", "किताब", "книга", "книгу"),
    ("a gift", "उपहार", "подарок", "подарок"),
    ("the letter", "चिट्ठी", "письмо", "письмо"),
    ("money", "पैसा", "деньги", "деньги"),
    ("rice", "चावल", "рис", "рис"),
    ("milk", "दूध", "молоко", "молоко"),
    ("the phone", "फ़ोन", "телефон", "телефон"),
    ("the key", "चाबी", "ключ", "ключ"),
    ("the ticket", "टिकट", "билет", "билет"),
    ("coffee", "कॉफ़ी", "кофе", "кофе"),
]

TIMES = [
    ("today", "आज", "сегодня"),
    ("tomorrow", "कल", "завтра"),
    ("tonight", "आज रात", "сегодня вечером"),
    ("in the morning", "सुबह", "утром"),
    ("in the evening", "शाम को", "вечером"),
    ("soon", "जल्दी", "скоро"),
    ("on monday", "सोमवार को", "в понедельник"),
    ("next week", "अगले हफ़्ते", "на следующей неделе"),
]

TIMES_PAST = [
    ("yesterday", "कल", "вчера"),
    ("last week", "पिछले हफ़्ते", "на прошлой неделе"),
    ("this morning", "आज सुबह", "сегодня утром"),
    ("on sunday", "रविवार को", "в воскресенье"),
]


def frame_future():
    for s in SUBJECTS:
        for v in VERBS_FUTURE:
            for o in OBJECTS:
                for t in TIMES:
                    yield (
                        f"{s[0]} will {v[0]} {o[0]} {t[0]}",
                        f"{s[1]} {t[1]} {o[1]} {v[1]}",
                        f"{s[2]} {v[2]} {o[3]} {t[2]}",
                    )


def frame_future_short():
    for s in SUBJECTS:
        for v in VERBS_FUTURE:
            for o in OBJECTS:
                yield (
                    f"{s[0]} will {v[0]} {o[0]}",
                    f"{s[1]} {o[1]} {v[1]}",
                    f"{s[2]} {v[2]} {o[3]}",
                )


def frame_imperative():
    for v in VERBS_IMPERATIVE:
        for o in OBJECTS:
            for t in TIMES:
                yield (
                    f"please {v[0]} {o[0]} {t[0]}",
                    f"कृपया {t[1]} {o[1]} {v[1]}",
                    f"пожалуйста {v[2]} {o[3]} {t[2]}",
                )


def frame_imperative_short():
    for v in VERBS_IMPERATIVE:
        for o in OBJECTS:
            yield (
                f"{v[0]} {o[0]}",
                f"{o[1]} {v[1]}",
                f"{v[2]} {o[3]}",
            )


def frame_where():
    for o in OBJECTS:
        yield (
            f"where is {o[0]}?",
            f"{o[1]} कहाँ है?",
            f"где {o[2]}?",
        )


def frame_how_is():
    for n in HOW_IS_THINGS:
        yield (
            f"how is {n[0]}",
            f"{n[1]} कैसा है",
            f"как {n[2]}",
        )
    for n in HOW_IS_PEOPLE:
        yield (
            f"how is {n[0]}",
            f"{n[1]} कैसे हैं",
            f"как дела у {n[2]}",
        )


def frame_past_question():
    for v in VERBS_PAST:
        for o in OBJECTS:
            for t in TIMES_PAST:
                yield (
                    f"did you {v[0]} {o[0]} {t[0]}?",
                    f"क्या तुमने {t[1]} {o[1]} {v[1]}?",
                    f"ты {v[2]} {o[3]} {t[2]}?",
                )


def frame_past_question_short():
    for v in VERBS_PAST:
        for o in OBJECTS:
            yield (
                f"did you {v[0]} {o[0]}?",
                f"क्या तुमने {o[1]} {v[1]}?",
                f"ты {v[2]} {o[3]}?",
            )


def sample_frame(rng, triples, count):
    triples = list(triples)
    rng.shuffle(triples)
    return triples[:count]


def build_entries():
    rng = random.Random(SEED)
    entries = list(PHRASEBOOK)
    entries += list(frame_where())
    entries += list(frame_how_is())
    entries += list(frame_imperative_short())
    entries += sample_frame(rng, frame_future(), 420)
    entries += sample_frame(rng, frame_future_short(), 120)
    entries += sample_frame(rng, frame_imperative(), 150)
    entries += sample_frame(rng, frame_past_question(), 80)
    entries += sample_frame(rng, frame_past_question_short(), 60)
    seen = set()
    unique = []
    for entry in entries:
        if entry[0] in seen:
            continue
        seen.add(entry[0])
        unique.append(entry)
    if len(unique) < TARGET_SENTENCES:
        raise SystemExit(f"only {len(unique)} unique sentences, need {TARGET_SENTENCES}")
    return unique[:TARGET_SENTENCES]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default=Path(__file__).resolve().parents[1] / "data",
                        type=Path)
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    dev = builtin_table("devanagari")
    cyr = builtin_table("cyrillic")
    entries = build_entries()

    for en, hi, ru in entries:
        assert 3 <= len(en) <= 200 and validate_latin(en), f"bad english: {en!r}"
        hi_norm = unicodedata.normalize("NFC", hi)
        ru_norm = unicodedata.normalize("NFC", ru)
        for native, table, lang in ((hi_norm, dev, "hindi"), (ru_norm, cyr, "russian")):
            roman = transliterate(native, table)
            assert roman and validate_latin(roman), (
                f"{lang} rendering of {en!r} does not romanize cleanly: "
                f"{native!r} -> {roman!r}"
            )

    corpus_path = args.out_dir / "corpus_en.txt"
    with open(corpus_path, "w", encoding="utf-8", newline="\n") as fh:
        for en, _, _ in entries:
            fh.write(en + "\n")

    fixtures_path = args.out_dir / "translations.tsv"
    with open(fixtures_path, "w", encoding="utf-8", newline="\n") as fh:
        for en, hi, ru in entries:
            fh.write(f"{en}\thindi\t{unicodedata.normalize('NFC', hi)}\n")
            fh.write(f"{en}\trussian\t{unicodedata.normalize('NFC', ru)}\n")

    print(f"{len(entries)} sentences -> {corpus_path}")
    print(f"{2 * len(entries)} fixture translations -> {fixtures_path}")


if __name__ == "__main__":
    main()
