import { describe, expect, it } from 'vitest';

import { clipboardText, renderSummaryHtml, validationWarnings } from '../src/format.js';
import type { Reference, ValidationInfo } from '../src/types.js';

const refs: Reference[] = [
  { index: 1, id: 'a1', title: 'First paper' },
  { index: 2, id: 'a2', title: 'Second paper' },
];

describe('renderSummaryHtml', () => {
  it('links in-range citations to their result anchors', () => {
    const html = renderSummaryHtml('Claim [1]. Other claim [2].', refs);
    expect(html).toContain('href="#result-a1"');
    expect(html).toContain('href="#result-a2"');
    expect(html).toContain('data-cite="1"');
  });

  it('leaves out-of-range citations as plain text', () => {
    const html = renderSummaryHtml('Mystery [7].', refs);
    expect(html).not.toContain('href');
    expect(html).toContain('[7]');
  });

  it('splits paragraphs on blank lines', () => {
    const html = renderSummaryHtml('One [1].\n\nTwo [2].', refs);
    expect(html.match(/<p>/g)).toHaveLength(2);
  });

  it('escapes markup in the summary', () => {
    const html = renderSummaryHtml('<script>alert(1)</script> [1].', refs);
    expect(html).not.toContain('<script>');
    expect(html).toContain('&lt;script&gt;');
  });
});

describe('clipboardText', () => {
  it('is summary, blank line, References:, then one line per source', () => {
    const text = clipboardText('A summary [1][2].', refs);
    expect(text).toBe('A summary [1][2].\n\nReferences:\n[1] First paper\n[2] Second paper');
  });
});

describe('validationWarnings', () => {
  const clean: ValidationInfo = {
    hard_pass: true,
    out_of_range: [],
    sentence_count: 4,
    cited_sentence_count: 4,
    coverage: 1,
    unused_sources: [],
    paragraph_count: 1,
    structure_ok: true,
    grounding_warnings: [],
  };

  it('stays silent for a clean report', () => {
    expect(validationWarnings(clean)).toEqual([]);
  });

  it('describes each finding', () => {
    const warnings = validationWarnings({
      ...clean,
      out_of_range: [9],
      coverage: 0.5,
      cited_sentence_count: 2,
      structure_ok: false,
      unused_sources: [2],
      grounding_warnings: [{ sentence: 0, overlap: 0.1 }],
    });
    expect(warnings).toHaveLength(5);
    expect(warnings[0]).toContain('9');
  });
});
