import type { Reference, ValidationInfo } from './types.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

/**
 * Render summary text as paragraphs, turning every in-range "[k]" into a
 * link that jumps to the cited result element. Out-of-range or malformed
 * brackets stay literal text.
 */
export function renderSummaryHtml(summary: string, references: Reference[]): string {
  const paragraphs = summary
    .split(/\n\s*\n/)
    .map((p) => p.trim())
    .filter((p) => p.length > 0);
  const rendered = paragraphs.map((paragraph) => {
    const withLinks = escapeHtml(paragraph).replace(/\[(\d+)\]/g, (match, digits) => {
      const k = parseInt(digits, 10);
      const ref = references[k - 1];
      if (k < 1 || !ref) return match;
      return `<a class="cite" data-cite="${k}" href="#result-${escapeHtml(ref.id)}">[${k}]</a>`;
    });
    return `<p>${withLinks}</p>`;
  });
  return rendered.join('\n');
}

/** Clipboard form: summary, blank line, "References:", one "[k] title" per line. */
export function clipboardText(summary: string, references: Reference[]): string {
  const lines = references.map((r) => `[${r.index}] ${r.title}`);
  return `${summary}\n\nReferences:\n${lines.join('\n')}`;
}

/** Human-readable warning lines for the expandable validation notice. */
export function validationWarnings(validation: ValidationInfo): string[] {
  const warnings: string[] = [];
  if (validation.out_of_range.length > 0) {
    warnings.push(`citations outside the source range: ${validation.out_of_range.join(', ')}`);
  }
  if (validation.coverage < 1) {
    warnings.push(
      `${validation.cited_sentence_count} of ${validation.sentence_count} sentences carry a citation`,
    );
  }
  if (!validation.structure_ok) {
    warnings.push(`unexpected paragraph count: ${validation.paragraph_count}`);
  }
  if (validation.unused_sources.length > 0) {
    warnings.push(`sources never cited: ${validation.unused_sources.join(', ')}`);
  }
  for (const g of validation.grounding_warnings) {
    warnings.push(
      `sentence ${g.sentence + 1} overlaps weakly with its sources (${g.overlap.toFixed(2)})`,
    );
  }
  return warnings;
}
