/**
 * Pure view builders: every function maps documents (plus layout) to
 * markup strings.  Nothing in here touches the DOM or the network, which
 * is what keeps the golden test honest — the rendered UI is a function of
 * the server's responses and of nothing else.
 */

import type {
  Banner,
} from "./state.js";
import type {
  QPDoc,
  SessionView,
  WitnessCertificateDoc,
} from "./api.js";
import type { LayoutMap } from "./layout.js";

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

// ---------------------------------------------------------------------------
// quiver picture

interface ArrowClass {
  dashed: boolean; // star arrows from premutation
  double: boolean; // composite [pq] arrows
  red: boolean; // part of a 2-cycle
}

function arrowClass(id: string, onTwoCycle: boolean): ArrowClass {
  return {
    dashed: id.includes("*"),
    double: id.startsWith("["),
    red: onTwoCycle,
  };
}

function arrowPath(
  x1: number,
  y1: number,
  x2: number,
  y2: number,
  offset: number,
): string {
  // quadratic curve whose control point sits `offset` units to the left of
  // the segment's midpoint; parallel arrows fan out with distinct offsets
  const mx = (x1 + x2) / 2;
  const my = (y1 + y2) / 2;
  const dx = x2 - x1;
  const dy = y2 - y1;
  const len = Math.max(Math.hypot(dx, dy), 0.01);
  const nx = -dy / len;
  const ny = dx / len;
  const cx = mx + offset * nx;
  const cy = my + offset * ny;
  return `M ${x1.toFixed(2)} ${y1.toFixed(2)} Q ${cx.toFixed(2)} ${cy.toFixed(2)} ${x2.toFixed(2)} ${y2.toFixed(2)}`;
}

export interface QuiverRenderOptions {
  twoCycles?: Array<[number, number]>;
  /** 1-based vertices to mark (witness core). */
  highlight?: number[];
}

export function renderQuiver(qp: QPDoc, layout: LayoutMap, opts: QuiverRenderOptions = {}): string {
  const twoCycleSet = new Set((opts.twoCycles ?? []).map(([i, j]) => `${i}-${j}`));
  const highlight = new Set(opts.highlight ?? []);
  const out: string[] = [];
  out.push(
    '<svg class="quiver" viewBox="0 0 100 100" xmlns="http://www.w3.org/2000/svg">',
    "<defs>" +
      '<marker id="head" viewBox="0 0 8 8" refX="7" refY="4" markerWidth="5.5" markerHeight="5.5" orient="auto-start-reverse">' +
      '<path d="M 0 0 L 8 4 L 0 8 z" fill="context-stroke"/></marker>' +
      "</defs>",
  );

  // fan parallel arrows out, and curve opposite pairs away from each other
  const groups = new Map<string, typeof qp.arrows>();
  for (const a of qp.arrows) {
    const key = `${a.src}>${a.tgt}`;
    const g = groups.get(key) ?? [];
    g.push(a);
    groups.set(key, g);
  }
  for (const [key, group] of groups) {
    const [srcS, tgtS] = key.split(">");
    const src = Number(srcS);
    const tgt = Number(tgtS);
    const p1 = layout.get(src);
    const p2 = layout.get(tgt);
    if (!p1 || !p2) continue;
    const opposite = groups.has(`${tgt}>${src}`);
    const pairKey = `${Math.min(src, tgt)}-${Math.max(src, tgt)}`;
    const onTwoCycle = twoCycleSet.has(pairKey);
    group.forEach((a, idx) => {
      let offset = (idx - (group.length - 1) / 2) * 7;
      if (opposite) offset += src < tgt ? 5 : -5; // split the 2-cycle pair
      const cls = arrowClass(a.id, onTwoCycle);
      const classes = ["arrow"];
      if (cls.dashed) classes.push("star");
      if (cls.double) classes.push("composite");
      if (cls.red) classes.push("two-cycle");
      out.push(
        `<path class="${classes.join(" ")}" data-arrow="${escapeHtml(a.id)}" ` +
          `d="${arrowPath(p1.x, p1.y, p2.x, p2.y, offset)}" ` +
          'fill="none" marker-end="url(#head)"/>',
      );
    });
  }

  for (let v = 1; v <= qp.n; v++) {
    const p = layout.get(v);
    if (!p) continue;
    const label = qp.labels?.[v - 1] ?? String(v);
    if (highlight.has(v)) {
      out.push(
        `<circle class="core-halo" cx="${p.x.toFixed(2)}" cy="${p.y.toFixed(2)}" r="6.5"/>`,
      );
    }
    out.push(
      `<circle class="vertex" data-vertex="${v}" cx="${p.x.toFixed(2)}" cy="${p.y.toFixed(2)}" r="4.2"/>`,
      `<text class="vertex-label" data-vertex="${v}" x="${p.x.toFixed(2)}" y="${(p.y + 1.4).toFixed(2)}" text-anchor="middle">${escapeHtml(label)}</text>`,
    );
  }
  out.push("</svg>");
  return out.join("");
}

// ---------------------------------------------------------------------------
// panels

export function renderBadge(view: SessionView): string {
  const warn = view.twoCycles.length
    ? `<span class="chip warning">2-cycles: ${view.twoCycles
        .map(([i, j]) => `${i}–${j}`)
        .join(", ")}</span>`
    : "";
  const reduced = view.isReduced
    ? '<span class="chip ok">reduced</span>'
    : '<span class="chip warning">not reduced</span>';
  return `<span class="badge">${escapeHtml(view.classification)}</span>${reduced}${warn}`;
}

export function renderPotential(qp: QPDoc): string {
  if (qp.potential.length === 0) {
    return '<p class="empty">(no terms)</p>';
  }
  const items = qp.potential
    .map((t) => {
      const cycle = t.cycle.map(escapeHtml).join("·");
      return `<li><span class="coef">${escapeHtml(String(t.coef))}</span> ${cycle}</li>`;
    })
    .join("");
  return `<ul class="potential">${items}</ul><p class="note">trusted to degree ${qp.truncation}</p>`;
}

export function renderHistory(view: SessionView, redoDepth: number): string {
  const steps = view.history
    .map((h, i) => `<li>${i + 1}. μ at vertex ${h.k} <em>(${h.mode})</em></li>`)
    .join("");
  const redo = redoDepth > 0 ? ` · redo available: ${redoDepth}` : "";
  return `<ol class="history">${steps}</ol><p class="note">applied: ${view.history.length}${redo}</p>`;
}

export function renderBanner(banner: Banner): string {
  if (!banner) return "";
  if (banner.kind === "obstruction") {
    return `<div class="banner obstruction">mutation blocked: ${escapeHtml(banner.reason)}</div>`;
  }
  if (banner.kind === "retry") {
    return (
      `<div class="banner retry">network failure — ${escapeHtml(banner.description)} ` +
      '<button data-action="retry">retry</button></div>'
    );
  }
  return `<div class="banner error">${escapeHtml(banner.code)}: ${escapeHtml(banner.reason)}</div>`;
}

// ---------------------------------------------------------------------------
// witness certificate

function instanceTable(cert: WitnessCertificateDoc): string {
  const rows = cert.instances
    .map((inst, i) => {
      const ok = cert.verified[i] ? "✓" : "✗";
      const dims = inst.module.dims.join(",");
      return (
        `<tr><td>${escapeHtml(String(inst.param))}</td>` +
        `<td>${escapeHtml(inst.module.field)}</td>` +
        `<td>(${dims})</td><td class="mark">${ok}</td><td class="mark">${ok}</td></tr>`
      );
    })
    .join("");
  return (
    '<table class="instances"><thead><tr>' +
    "<th>parameter</th><th>field</th><th>dims</th><th>stable</th><th>brick</th>" +
    `</tr></thead><tbody>${rows}</tbody></table>`
  );
}

function evidenceTable(cert: WitnessCertificateDoc): string {
  if (!cert.evidence) return "";
  const counts = Object.entries(cert.evidence.counts)
    .map(([f, c]) => `<tr><td>${escapeHtml(f)}</td><td>${c}</td></tr>`)
    .join("");
  const skipped = Object.entries(cert.evidence.skipped)
    .map(([f, why]) => `<li>${escapeHtml(f)}: ${escapeHtml(why)}</li>`)
    .join("");
  return (
    '<table class="evidence"><thead><tr><th>field</th><th>stable classes</th></tr></thead>' +
    `<tbody>${counts}</tbody></table>` +
    (skipped ? `<ul class="skipped">${skipped}</ul>` : "")
  );
}

export function renderWitness(cert: WitnessCertificateDoc): string {
  const out: string[] = [`<h3 class="status status-${cert.status}">${cert.status}</h3>`];
  if (cert.status === "no_witness_dynkin") {
    out.push('<div class="banner no-witness">no witness expected</div>');
  }
  out.push(`<p>classification: ${escapeHtml(cert.classification)}</p>`);
  if (cert.core) {
    out.push(`<p>core vertices: ${cert.core.join(", ")} (${escapeHtml(cert.coreKind ?? "")})</p>`);
  }
  if (cert.thetaLifted) {
    out.push(`<p>θ = (${cert.thetaLifted.join(", ")})</p>`);
  }
  if (cert.instances.length) {
    const dims = cert.instances[0]!.module.dims;
    out.push(`<p>d = (${dims.join(", ")})</p>`, instanceTable(cert));
  }
  out.push(evidenceTable(cert));
  if (cert.diagnostics.length) {
    out.push(
      '<ul class="diagnostics">' +
        cert.diagnostics.map((d) => `<li>${escapeHtml(d)}</li>`).join("") +
        "</ul>",
    );
  }
  if (cert.caveats.length) {
    out.push(
      '<ul class="caveats">' +
        cert.caveats.map((c) => `<li>${escapeHtml(c)}</li>`).join("") +
        "</ul>",
    );
  }
  return out.join("");
}
