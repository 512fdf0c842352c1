"""Prompt templates for sample generation and benchmark tasks.

Placeholders use ``{name}`` where name is a Python identifier; anything else
between braces (JSON examples in particular) is left untouched by
``render_prompt`` in the pipeline module.
"""

from __future__ import annotations

CREATIVE_HOMOPHONIC = """\
# Role

You are an expert in multimodal humor. Your task is to generate visual pun data based on Homophones (words that sound the same but have different meanings and spellings).

# Task Definition

I will provide you with two words:

1. Word A (Visual Object): The word that determines the visual appearance (S_p).
2. Word B (Hidden Context): The word that determines the behavior/action (S_a).

You need to generate:

1. Image Description: Description of Object A acting out the meaning of Word B.
2. Caption: A sentence containing Word A, but implying Word B.
3. Interpretation: An analysis of the pun.

# Example

Input:

* Word A: pear: sweet juicy gritty-textured fruit available in many varieties
* Word B: pair: two items of the same kind

Output:

Image Description: Two cartoon pears holding hands and smiling happily at each other.

Caption: We make a great pear.

Interpretation: Visual depicts two pears (literal object, S_p) holding hands like a romantic pair (figurative behavior, S_a). The caption exploits the homophonic relationship between 'pear' (w_p) and 'pair' (w_a), creating humor through sound similarity between different meanings.

# Current Input

* Word A: {word_a}: {gloss_a}
* Word B: {word_b}: {gloss_b}

# Output
"""

CREATIVE_HOMOGRAPHIC = """\
# Role

You are an expert in multimodal humor. Your task is to generate visual pun data based on Homographic Puns (a single word with multiple meanings in the same spelling).

# Task Definition

I will provide you with one word and its two distinct definitions:

1. The Word: The lexical item used in the caption.
2. Definition 1 (Visual Object): The literal/concrete meaning that determines the physical appearance of the object (S_p).
3. Definition 2 (Hidden Context): The figurative behavior/state meaning that determines the behavior, action, or setting (S_a).

You need to generate:

1. Image Description: A description of the object from Definition 1 performing the action or situated in the context of Definition 2.
2. Caption: A witty sentence using "The Word", where the sentence structure strongly implies Definition 2.
3. Interpretation: A concise explanation of the pun mechanism.

# Example

Input:

* The Word: fan
* Definition 1: a device for creating a current of air by movement of a surface or surfaces
* Definition 2: an ardent follower and admirer

Output:

* Image Description: A large electric floor fan in a stadium seat, holding a foam finger and cheering loudly.
* Caption: I'm your biggest fan.
* Interpretation: Visual shows a cooling fan (literal object, S_p); caption uses 'fan' as admirer (figurative behavior, S_a), creating a homographic pun where the same word embodies both meanings.

# Current Input

* The Word: {word}
* Definition 1 (Visual Object): {gloss_p}
* Definition 2 (Hidden Context): {gloss_a}

# Output
"""

EXPLICATIVE_SUBSTITUTION = """\
You are a data augmentation expert. Given the following pun, generate an Explicative Substitution variant:

Original Caption: {caption}
Pun Word (w_p): {word}
Hidden Meaning (S_a): {meaning}

Task: Replace w_p with an EXPLICIT STATEMENT of the hidden meaning S_a.

Constraints:
- Do NOT use w_p or w_a directly
- Use paraphrases or synonyms to express S_a
- Adjust grammar if needed for naturalness
- Prefer single-word replacements when possible

Example:

Original: "We make a great pear."
Hidden Meaning: romantic couple
Output: "We make a great romantic couple."

Output ONLY the new caption.
"""

RANDOM_SUBSTITUTION = """\
You are a data augmentation expert. Given the following pun, generate a Random Substitution variant:

Original Image Prompt: {visual_description}
Original Caption: {caption}
Pun Word (w_p): {word}
Random Entity: {entity}

Task:
1. Replace the main object in the image prompt with the given random entity
2. Replace w_p in the caption with the same random entity
3. Keep the same action/context structure

Constraints:
- The random entity is a concrete, visualizable noun unrelated to the original pun
- Use the given entity exactly; do not choose a different one

Example:

Original Visual: "Two cartoon pears holding hands..."
Original Caption: "We make a great pear."
Random Entity: banana
New Visual: "Two cartoon bananas holding hands..."
New Caption: "We make a great banana."

Output exactly two lines:
New Visual: <rewritten image prompt>
New Caption: <rewritten caption>
"""

# ---------------------------------------------------------------------------
# Benchmark task prompts.  Each template leaves {task_sentence} and
# {bias_note} open so one body serves both bias variants.

_PUN_TASK_SENTENCE = (
    "Analyze the provided image and caption to determine if they constitute "
    "a Multimodal Pun.{task_suffix}"
)
_NONPUN_TASK_SENTENCE = (
    "Analyze the provided image and caption to determine if they constitute "
    "a Non-Pun (not a pun).{task_suffix}"
)
BIAS_NOTE = "Note: Answer true if it is a pun, false if it is a non-pun.\n\n"

DETECTION = """\
You are an expert linguist specializing in Multimodal Puns.

Task Description

{task_sentence}

{bias_note}Input Data

Caption: {caption}

Output Requirements

Output ONLY a JSON object:

{"is_pun": true/false}

IMPORTANT: Output ONLY the JSON object, no additional text or explanation.
"""

LOCALIZATION = """\
You are an expert linguist specializing in Multimodal Puns.

Task Description

{task_sentence}

{bias_note}Definitions

1. Homophonic Pun: The caption contains a word that sounds like another word with different spelling and meaning.
   - w_p: The word actually appearing in the caption
   - w_a: The hidden word it sounds like (different spelling/meaning)
   - Example: "pear" (in caption) sounds like "pair" (hidden meaning)

2. Homographic Pun: The caption contains a word with two distinct meanings in the same spelling.
   - w_p and w_a are the same word appearing in the caption (both should be identical)
   - Example: "fan" means both "cooling device" and "enthusiast"

Input Data

Caption: {caption}

Output Requirements

If it is NOT a pun:

{"is_pun": false}

If it IS a pun:

{
  "is_pun": true,
  "type": "<Homophonic or Homographic>",
  "tuple": {
    "wp": "<The EXACT word appearing in the caption>",
    "wa": "<The hidden/alternative word>"
  }
}

IMPORTANT: Output ONLY the JSON object with the fields shown above. Do NOT include semantic definitions (S_p or S_a). Only provide the word pair (wp and wa). No additional text or explanation.
"""

EXPLANATION = """\
You are an expert linguist specializing in Multimodal Puns.

Task Description

{task_sentence}

{bias_note}CRITICAL RULE: What is a Multimodal Pun?

A multimodal pun MUST satisfy ALL of the following conditions:
1. The pun word MUST explicitly appear in the caption text
2. This word must create dual meanings through either:
   - Phonetic similarity (sounds like another word with different spelling/meaning)
   - Lexical polysemy (same spelling but two distinct meanings)
3. Visual-linguistic coupling: The image fuses a literal object (S_p) with a figurative behavior/state (S_a), while the text unifies them through the pun word

IMPORTANT: If the caption does not contain the pun word, or if the visual and textual meanings are not genuinely linked, it is NOT a multimodal pun.

Definitions

1. Homophonic Pun: Exploits sound similarity between words with different spelling and meaning.
   - w_p: The word actually appearing in the caption
   - w_a: The hidden word it sounds like (different spelling/meaning)
   - S_p: The literal/concrete object depicted in the image
   - S_a: The figurative behavior/state associated with the alternative word
   - Example: "We make a great pear" --- image shows pears (S_p) holding hands like a romantic pair (S_a)

2. Homographic Pun: Exploits dual meanings of a word with the same spelling.
   - w_p and w_a are the same word appearing in the caption
   - S_p: The concrete/literal sense depicted visually in the image
   - S_a: The figurative/abstract sense implied by the textual context
   - Example: "I'm a big fan of yours" --- image shows a cooling fan (S_p) cheering like an enthusiast (S_a)

Input Data

Caption: {caption}

Analysis Steps

1. First, identify if there is a word in the caption that could have dual meanings
2. Check if one meaning relates to the image and another to the text context
3. Only if BOTH conditions are met, classify as a pun

Output Requirements

Condition A: If it is NOT a pun:

Output exactly this JSON:

{"is_pun": false}

Condition B: If it IS a pun:

The pun word MUST be present in the caption. Output:

{
  "is_pun": true,
  "type": "<Homophonic or Homographic>",
  "explanation": "<Brief explanation of how the pun creates humor through visual-linguistic interplay>",
  "tuple": {
    "wp": "<The EXACT word appearing in the caption that creates the pun>",
    "wa": "<The alternative word: different spelling if Homophonic, same spelling if Homographic>",
    "Sp": "<The literal/concrete meaning shown in the image>",
    "Sa": "<The figurative/abstract meaning implied by context>"
  }
}

IMPORTANT: Output ONLY the JSON object, no additional text or explanation.
"""

PUN_COT = """\
You are an expert linguist specializing in Multimodal Puns.

Task Description

{task_sentence} Use a structured three-stage verification process to avoid common errors.

{bias_note}Formal Definition

A multimodal pun is represented as P = <w_p, w_a, S_p, S_a> where:
- w_p: The pun word explicitly appearing in the caption
- w_a: The alternative word (hidden meaning)
- S_p: The literal/concrete object sense (depicted visually in the image)
- S_a: The figurative behavior/state sense (implied by textual context)

Pun Types

1. Homophonic Pun: Exploits sound similarity between words with different spelling and meaning
   - Example: "pear" (in caption) sounds like "pair" (hidden meaning)
   - Image shows pears (literal object) holding hands like a romantic pair (figurative behavior)

2. Homographic Pun: Exploits dual meanings of a word with the same spelling
   - Example: "fan" means both "cooling device" and "enthusiast"
   - Image shows a fan device (literal object) cheering like an enthusiast (figurative behavior)

CRITICAL THREE-STAGE VERIFICATION

STAGE 1: Visual Grounding (Prevent Visual Object Hallucination)
- First, describe EXACTLY what visual object you see in the image
- DO NOT infer objects based on text context
- DO NOT assume objects that are not visually present
- Example: If you see apples, do NOT call them "dates" even if the text mentions "date"

STAGE 2: Lexical Anchoring (Prevent Pun Keyword Hallucination)
- Identify the EXACT words in the caption text
- DO NOT mentally replace words with idiom components
- Example: If caption says "I'm your biggest lamp", do NOT treat it as if it says "fan"
- List all potential pun candidates from the ACTUAL caption words

STAGE 3: Cross-Modal Verification (Prevent Phonetic/Semantic Hallucination)

For each potential pun word, verify:

a) Phonetic Bridge (for Homophonic): Do w_p and w_a ACTUALLY sound similar?
   - REJECT if phonetically distinct (e.g., "banana" does NOT sound like "soul")
   - Require genuine phonetic similarity

b) Semantic Bridge (for Homographic): Does the word have TWO established meanings?
   - REJECT if forcing meanings onto unrelated words
   - Example: "banana" does NOT have a meaning related to "pair" or "couple"

c) Visual-Textual Link: Does the visual object connect to text via valid pun mechanism?
   - For Homophonic: Visual shows S_p (literal object of w_p), text implies S_a (figurative behavior of w_a)
   - For Homographic: Same word connects both the literal visual sense and figurative textual sense
   - REJECT weak or fabricated connections

Input Data

Caption: {caption}

Output Requirements

If it is NOT a pun (failed any verification stage):

{"is_pun": false}

If it IS a pun (passed all verification stages):

{
  "is_pun": true,
  "type": "<Homophonic or Homographic>",
  "explanation": "<Brief explanation of the verified pun mechanism>",
  "tuple": {
    "wp": "<The EXACT word appearing in the caption>",
    "wa": "<The alternative word: different spelling if Homophonic, same spelling if Homographic>",
    "Sp": "<The literal/concrete meaning shown in the image>",
    "Sa": "<The figurative/abstract meaning implied by context>"
  }
}

IMPORTANT:
- Execute ALL three verification stages before making judgment
- Be conservative: when in doubt, classify as NOT a pun
- The pun word MUST explicitly appear in the caption
- Output ONLY the JSON object, no additional text
"""

PAIRWISE_JUDGE = """\
You are comparing two explanations of the same visual pun. Decide which
explanation accounts for the wordplay more accurately and completely, or
whether they are equally good.

Caption: {caption}

Explanation A: {explanation_a}

Explanation B: {explanation_b}

Reply with exactly one of: "WINNER: A", "WINNER: B", or "TIE".
"""


def task_sentence(bias: str, suffix: str = "") -> str:
    """The task-description sentence for the given bias variant."""
    if bias == "to-pun":
        return _PUN_TASK_SENTENCE.format(task_suffix=suffix)
    if bias == "to-non-pun":
        return _NONPUN_TASK_SENTENCE.format(task_suffix=suffix)
    raise ValueError(f"unknown bias: {bias!r}")
