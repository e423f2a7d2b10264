/**
 * Canonical JSON text, byte-compatible with the server's serializer
 * (sorted keys, no whitespace, non-ASCII escaped as \\uXXXX).
 *
 * Documents on this wire only ever contain strings, integers, booleans,
 * null, arrays and plain objects, so a tiny recursive printer is exact.
 */

function stringifyString(s: string): string {
  // JSON.stringify handles quoting and control characters; escape the
  // remaining non-ASCII code units the way the server does.  Surrogate
  // halves are escaped one by one, which reproduces the server's
  // surrogate-pair form for astral characters.
  const quoted = JSON.stringify(s);
  let out = "";
  for (let i = 0; i < quoted.length; i++) {
    const code = quoted.charCodeAt(i);
    out += code < 0x80 ? quoted[i] : "\\u" + code.toString(16).padStart(4, "0");
  }
  return out;
}

export function canonicalStringify(value: unknown): string {
  if (value === null) return "null";
  if (typeof value === "boolean") return value ? "true" : "false";
  if (typeof value === "number") {
    if (!Number.isInteger(value)) {
      throw new Error(`non-integer number ${value} has no canonical form here`);
    }
    return String(value);
  }
  if (typeof value === "string") return stringifyString(value);
  if (Array.isArray(value)) {
    return "[" + value.map(canonicalStringify).join(",") + "]";
  }
  if (typeof value === "object") {
    const entries = Object.entries(value as Record<string, unknown>)
      .filter(([, v]) => v !== undefined)
      .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0));
    return (
      "{" +
      entries.map(([k, v]) => stringifyString(k) + ":" + canonicalStringify(v)).join(",") +
      "}"
    );
  }
  throw new Error(`cannot canonicalize a ${typeof value}`);
}
