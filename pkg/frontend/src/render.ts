// HTML renderers. All functions are pure string builders so the screen
// can be asserted on in tests; the browser shell mounts the result and
// delegates events.

import { ProposalView, SessionView, TurnView } from "./api"
import { ViewState, chipsForTurn, levelBadges } from "./state"

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
}

function turnText(turn: TurnView): string {
  const note = turn.action_note ? ` [${turn.action_note}]` : ""
  return `${turn.text}${note}`.trim()
}

function renderTurn(view: ViewState, turn: TurnView): string {
  const { session } = view
  const chips = chipsForTurn(session, turn.index)
    .map(
      (chip) =>
        `<span class="chip chip-${chip.kind}">${escapeHtml(chip.label)}</span>`,
    )
    .join("")
  const current =
    !session.finished && turn.index === session.cursor ? " turn-current" : ""
  return (
    `<li class="turn${current}" data-turn="${turn.index}">` +
    `<span class="turn-index">(${turn.index})</span> ` +
    `<span class="turn-speaker">${escapeHtml(turn.speaker)}</span> ` +
    `<span class="turn-text">${escapeHtml(turnText(turn))}</span>` +
    chips +
    `</li>`
  )
}

function renderProposal(
  session: SessionView,
  proposal: ProposalView,
  isTop: boolean,
): string {
  const source = session.turns[proposal.source]
  const badges = levelBadges(proposal.satisfied)
    .map(
      (badge) =>
        `<span class="badge ${badge.satisfied ? "badge-satisfied" : "badge-open"}">` +
        `${badge.level}</span>`,
    )
    .join("")
  const topMark = isTop ? `<span class="stack-top-mark">top</span>` : ""
  return (
    `<li class="stack-entry${isTop ? " stack-top" : ""}" ` +
    `data-source="${proposal.source}">` +
    `${topMark}<span class="stack-source">(${proposal.source})</span> ` +
    `<span class="stack-text">${escapeHtml(turnText(source))}</span>` +
    badges +
    `</li>`
  )
}

function renderClosed(session: SessionView, proposal: ProposalView): string {
  const source = session.turns[proposal.source]
  const closer =
    proposal.closed_by === null || proposal.closed_by === undefined
      ? ""
      : ` by (${proposal.closed_by})`
  return (
    `<li class="closed-entry" data-source="${proposal.source}">` +
    `(${proposal.source}) ${escapeHtml(turnText(source))}` +
    ` <span class="closed-cause">${escapeHtml(proposal.close_cause ?? "")}` +
    `${closer}</span></li>`
  )
}

export function renderStackPanel(view: ViewState): string {
  const { entries, closed } = view.session.stack
  const top = entries.length - 1
  const openItems = entries
    .slice()
    .reverse()
    .map((proposal, i) => renderProposal(view.session, proposal, i === 0 && top >= 0))
    .join("")
  const closedItems = closed
    .map((proposal) => renderClosed(view.session, proposal))
    .join("")
  return (
    `<section class="stack-panel">` +
    `<h2>Open proposals</h2>` +
    `<ul class="stack-list">${openItems}</ul>` +
    `<h3>Closed</h3>` +
    `<ul class="closed-list">${closedItems}</ul>` +
    `</section>`
  )
}

export function renderPromptPanel(view: ViewState): string {
  const { prompt, session } = view
  if (prompt.finished || session.finished) {
    return (
      `<section class="prompt-panel prompt-finished">` +
      `<h2>Done</h2>` +
      `<p>All ${session.turns.length} turns annotated.</p>` +
      `<button data-action="export">Export session file</button>` +
      `</section>`
    )
  }
  const answers = (prompt.answers ?? [])
    .map(
      (answer) =>
        `<button class="answer" data-answer="${escapeHtml(answer)}">` +
        `${escapeHtml(answer)}</button>`,
    )
    .join("")
  const candidate =
    prompt.candidate_source === null || prompt.candidate_source === undefined
      ? ""
      : `<p class="prompt-candidate">candidate source: (${prompt.candidate_source})</p>`
  return (
    `<section class="prompt-panel">` +
    `<h2>${escapeHtml(prompt.point ?? "")} · turn (${prompt.turn})</h2>` +
    `<p class="prompt-question">${escapeHtml(prompt.question ?? "")}</p>` +
    candidate +
    `<div class="answers">${answers}</div>` +
    `<label class="gp-tag">secondary tag ` +
    `<select data-role="gp-tag">` +
    `<option value="">none</option>` +
    `<option>repetition</option><option>clausal</option>` +
    `<option>intended</option><option>correction</option>` +
    `</select></label>` +
    `</section>`
  )
}

export function renderSession(view: ViewState): string {
  const banner = view.banner
    ? `<div class="banner">${escapeHtml(view.banner)}</div>`
    : ""
  const turns = view.session.turns
    .map((turn) => renderTurn(view, turn))
    .join("")
  const undo =
    `<form class="undo" data-role="undo">` +
    `<label>truncate log to <input name="length" type="number" min="0" ` +
    `max="${view.session.version}" value="${view.session.version}"></label>` +
    `<button type="submit">undo</button>` +
    `</form>`
  return (
    banner +
    `<header class="session-header">` +
    `<span>dialogue ${escapeHtml(view.session.dialogue)}</span>` +
    `<span>annotator ${escapeHtml(view.session.annotator)}</span>` +
    `<span class="version">version ${view.session.version}</span>` +
    `</header>` +
    `<main class="layout">` +
    `<section class="turn-panel"><h2>Turns</h2>` +
    `<ol class="turn-list">${turns}</ol></section>` +
    renderStackPanel(view) +
    renderPromptPanel(view) +
    `</main>` +
    undo
  )
}
