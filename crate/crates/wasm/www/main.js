import init, { analyze_weil, analyze_curve, frobenius_table } from "./pkg/frobhom_wasm.js";

const $ = (id) => document.getElementById(id);

function el(tag, text, cls) {
  const e = document.createElement(tag);
  if (text !== undefined) e.textContent = text;
  if (cls) e.className = cls;
  return e;
}

function showError(target, err) {
  target.replaceChildren(el("p", String(err.message || err), "err"));
}

function verdictNode(v) {
  const p = el("p");
  if (v.supersingular) {
    p.append(el("span", "supersingular", "yes"), ` m = ${v.m}, Q = `);
    p.append(v.factors.map(([n, k]) => (k === 1 ? `Phi_${n}` : `Phi_${n}^${k}`)).join(" * "));
  } else {
    p.append(el("span", "not supersingular", "no"), ` (${v.reason})`);
  }
  const slopes = v.newton_slopes.map(([a, b, k]) => (b === 1 ? `${a}` : `${a}/${b}`) + ` x${k}`);
  p.append(el("br"), `slopes: ${slopes.join(", ")}`);
  return p;
}

function drawCircle(canvas, roots) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, r = w * 0.38;
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#bbb";
  ctx.beginPath();
  ctx.moveTo(0, h / 2); ctx.lineTo(w, h / 2);
  ctx.moveTo(w / 2, 0); ctx.lineTo(w / 2, h);
  ctx.stroke();
  ctx.strokeStyle = "#666";
  ctx.beginPath();
  ctx.arc(w / 2, h / 2, r, 0, 2 * Math.PI);
  ctx.stroke();
  ctx.fillStyle = "#c33";
  for (const [re, im] of roots) {
    ctx.beginPath();
    ctx.arc(w / 2 + re * r, h / 2 - im * r, 4, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function drawNewton(canvas, vertices) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 24;
  ctx.clearRect(0, 0, w, h);
  const xmax = Math.max(...vertices.map((v) => v[0]), 1);
  const ymax = Math.max(...vertices.map((v) => v[1]), 1);
  const X = (x) => pad + (x / xmax) * (w - 2 * pad);
  const Y = (y) => h - pad - (y / ymax) * (h - 2 * pad);
  ctx.strokeStyle = "#bbb";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "11px monospace";
  ctx.fillText(`i = 0..${xmax}`, pad, h - 6);
  ctx.fillText(`v_p(c_i) <= ${ymax}`, pad, 14);
  ctx.strokeStyle = "#36c";
  ctx.lineWidth = 2;
  ctx.beginPath();
  vertices.forEach(([x, y], i) => (i ? ctx.lineTo(X(x), Y(y)) : ctx.moveTo(X(x), Y(y))));
  ctx.stroke();
  ctx.lineWidth = 1;
  ctx.fillStyle = "#36c";
  for (const [x, y] of vertices) {
    ctx.beginPath();
    ctx.arc(X(x), Y(y), 3.5, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function runWeil() {
  const out = $("w-out");
  try {
    const r = JSON.parse(analyze_weil($("w-q").value, $("w-c").value));
    out.replaceChildren(el("p", `P(T) = ${r.display}`), verdictNode(r.verdict));
    drawCircle($("w-circle"), r.roots);
    drawNewton($("w-newton"), r.newton_vertices);
  } catch (e) {
    showError(out, e);
  }
}

function curveArgs() {
  return [Number($("c-p").value), Number($("c-k").value), $("c-a").value];
}

function runCurve() {
  const out = $("c-out");
  try {
    const r = JSON.parse(analyze_curve(...curveArgs(), $("c-l").value));
    const nodes = [el("p", r.display), el("p", `P(T) coefficients: [${r.charpoly.coeffs.join(", ")}]`), verdictNode(r.verdict)];
    const counts = el("table");
    counts.append(el("tr"));
    counts.firstChild.append(el("th", "r"), el("th", "#E(F_q^r)"), el("th", "from P"));
    for (const c of r.point_counts) {
      const tr = el("tr");
      tr.append(el("td", c.r), el("td", c.count), el("td", c.predicted));
      counts.append(tr);
    }
    nodes.push(counts);
    if (r.torsion_checks) {
      const m = r.verdict.m;
      for (const t of r.torsion_checks) {
        const p = el("p", `E[${t.ell}]: ${t.size} points over F_q^${t.r}, sigma^${2 * m} = [q^${m}] `);
        p.append(el("span", t.pass ? "holds" : "fails", t.pass ? "yes" : "no"));
        nodes.push(p);
      }
      for (const s of r.skipped) nodes.push(el("p", `E[${s.ell}] skipped: ${s.why}`));
      $("t-m").value = m;
    }
    out.replaceChildren(...nodes);
  } catch (e) {
    showError(out, e);
  }
}

function runTable() {
  const out = $("t-out");
  try {
    const r = JSON.parse(frobenius_table(...curveArgs(), Number($("t-l").value), Number($("t-m").value)));
    const head = el("p", `E[${r.ell}] over ${r.field} (r = ${r.r}); [q^${r.m}] acts as [${r.scalar}]`);
    const table = el("table");
    const hr = el("tr");
    for (const h of ["P", "sigma(P)", `sigma^${2 * r.m}(P)`, `[${r.scalar}]P`, ""]) hr.append(el("th", h));
    table.append(hr);
    for (const row of r.rows) {
      const tr = el("tr");
      tr.append(el("td", row.point), el("td", row.sigma), el("td", row.sigma_2m), el("td", row.scalar));
      tr.append(el("td", row.equal ? "=" : "!=", row.equal ? "yes" : "no"));
      table.append(tr);
    }
    const bad = r.rows.filter((x) => !x.equal).length;
    out.replaceChildren(head, el("p", bad ? `${bad} of ${r.rows.length} points differ` : `all ${r.rows.length} points agree`), table);
  } catch (e) {
    showError(out, e);
  }
}

await init();
$("w-go").onclick = runWeil;
$("c-go").onclick = runCurve;
$("t-go").onclick = runTable;
runWeil();
runCurve();
