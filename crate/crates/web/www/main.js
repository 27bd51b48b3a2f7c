import init, { kuribayashiFlexes, classifyPoint, boundTables } from "./pkg/wlab_web.js";

const $ = (id) => document.getElementById(id);
const out = $("out");
const summary = $("summary");
const canvas = $("plot");
const ctx = canvas.getContext("2d");
const VIEW = 2.2;
const COLORS = { 3: "#1f77b4", 4: "#ff7f0e", 5: "#2ca02c", 6: "#d62728" };

function rational(s) {
  const [p, q] = s.trim().split("/");
  const v = Number(p) / (q === undefined ? 1 : Number(q));
  if (!Number.isFinite(v)) throw new Error(`not a rational number: ${s}`);
  return v;
}

// Scalar strings such as "1/2", "-0.25+1.5e-3i" or "-i" as [re, im].
function complex(s) {
  s = s.trim();
  if (!s.endsWith("i")) return [rational(s), 0];
  let cut = -1;
  for (let k = s.length - 2; k > 0; k--) {
    if ((s[k] === "+" || s[k] === "-") && s[k - 1] !== "e" && s[k - 1] !== "E") { cut = k; break; }
  }
  const re = cut < 0 ? 0 : rational(s.slice(0, cut));
  let im = cut < 0 ? s.slice(0, -1) : s.slice(cut, -1);
  im = im.replace(/\*$/, "");
  if (im === "" || im === "+") im = "1";
  if (im === "-") im = "-1";
  return [re, rational(im)];
}

// Affine real point (X/Z, Y/Z) when the projective point is real with Z != 0.
function realAffine(coords) {
  const [x, y, z] = coords.map(complex);
  const n = z[0] * z[0] + z[1] * z[1];
  if (n < 1e-12) return null;
  const div = (w) => [(w[0] * z[0] + w[1] * z[1]) / n, (w[1] * z[0] - w[0] * z[1]) / n];
  const u = div(x), v = div(y);
  if (Math.abs(u[1]) > 1e-9 || Math.abs(v[1]) > 1e-9) return null;
  return [u[0], v[0]];
}

const toPixel = (u, v) => [
  ((u + VIEW) / (2 * VIEW)) * canvas.width,
  ((VIEW - v) / (2 * VIEW)) * canvas.height,
];

function drawCurve(a, b, c) {
  const f = (x, y) => x ** 6 + y ** 6 + 1 + a * x ** 3 * y ** 3 + b * x ** 3 + c * y ** 3;
  ctx.fillStyle = "#fff";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#ddd";
  ctx.beginPath();
  ctx.moveTo(canvas.width / 2, 0); ctx.lineTo(canvas.width / 2, canvas.height);
  ctx.moveTo(0, canvas.height / 2); ctx.lineTo(canvas.width, canvas.height / 2);
  ctx.stroke();
  const step = (2 * VIEW) / canvas.width;
  ctx.fillStyle = "#333";
  for (let i = 0; i < canvas.width; i++) {
    for (let j = 0; j < canvas.height; j++) {
      const x = -VIEW + i * step, y = VIEW - j * step;
      const s = Math.sign(f(x, y));
      if (s !== Math.sign(f(x + step, y)) || s !== Math.sign(f(x, y - step))) ctx.fillRect(i, j, 1, 1);
    }
  }
}

function drawFlexes(points) {
  for (const p of points) {
    const uv = realAffine(p.coordinates);
    if (!uv) continue;
    const [px, py] = toPixel(uv[0], uv[1]);
    ctx.fillStyle = COLORS[p.flex_contact] || "#9467bd";
    ctx.beginPath();
    ctx.arc(px, py, 5, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function table(rows, header) {
  const esc = (s) => String(s).replace(/&/g, "&amp;").replace(/</g, "&lt;");
  const head = header.map((h) => `<th>${esc(h)}</th>`).join("");
  const body = rows.map((r) => `<tr>${r.map((c) => `<td>${esc(c)}</td>`).join("")}</tr>`).join("");
  return `<table><tr>${head}</tr>${body}</table>`;
}

const gaps = (g) => (g ? `{${g.join(",")}}` : "-");

function run(label, job) {
  out.textContent = `${label}...`;
  summary.innerHTML = "";
  setTimeout(() => {
    const t0 = performance.now();
    try {
      const doc = JSON.parse(job());
      out.textContent = JSON.stringify(doc, null, 2);
      show(doc, performance.now() - t0);
    } catch (e) {
      out.textContent = `error: ${e}`;
    }
  }, 20);
}

function show(doc, ms) {
  let html = `<p>${doc.command} in ${(ms / 1000).toFixed(1)} s`;
  if (doc.inconsistencies) html += `; <b>internal inconsistencies: ${doc.inconsistencies.length}</b>`;
  html += "</p>";
  if (doc.points && doc.points.length) {
    html += table(
      doc.points.map((p) => [p.kind || "error", p.flex_contact ?? "-", gaps(p.gaps), p.weight ?? "-", p.wronskian_weight ?? "-", p.table_consistency || p.error]),
      ["kind", "flex contact", "gaps", "weight", "wronskian", "table"],
    );
  }
  if (doc.tables) {
    for (const [name, rows] of Object.entries(doc.tables)) {
      html += `<h3>${name}</h3>` + table(
        rows.map((r) => [r.order, r.contact, r.weight ?? "-", r.bound, gaps(r.expected_gaps), r.annotation || ""]),
        ["i", "contact", "weight", "bound", "expected gaps", "note"],
      );
    }
  }
  summary.innerHTML = html;
}

$("scan").onclick = () => {
  const [a, b, c] = ["a", "b", "c"].map((k) => $(k).value);
  try {
    drawCurve(rational(a), rational(b), rational(c));
  } catch (e) {
    out.textContent = `error: ${e.message}`;
    return;
  }
  run("Locating flexes", () => {
    const json = kuribayashiFlexes(a, b, c, $("field").value, Number($("bits").value) || 0);
    drawFlexes(JSON.parse(json).points || []);
    return json;
  });
};

$("classify").onclick = () => run("Classifying", () => classifyPoint($("curve-json").value, $("point").value));
$("tables").onclick = () => run("Tables", () => boundTables());

await init();
out.textContent = "Ready.";
drawCurve(0.5, 0, -1);
