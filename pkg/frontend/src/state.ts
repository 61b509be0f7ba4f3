// View-state model: a pure function of the last fetched server responses.

import { AnnotationView, PromptView, SessionView } from "./api"

export interface ViewState {
  session: SessionView
  prompt: PromptView
  banner: string | null
}

export function buildViewState(
  session: SessionView,
  prompt: PromptView,
  banner: string | null = null,
): ViewState {
  return { session, prompt, banner }
}

export interface TurnChip {
  label: string
  kind: "cr" | "evidence" | "proposal"
  source?: number
  level?: string
}

const LEVEL_BADGES = ["L1", "L2", "L3", "L4"]

export function chipsForTurn(session: SessionView, turn: number): TurnChip[] {
  const chips: TurnChip[] = []
  for (const annotation of session.annotations) {
    if (annotation.turn !== turn) {
      continue
    }
    chips.push(chipFor(annotation))
  }
  return chips
}

function chipFor(annotation: AnnotationView): TurnChip {
  if (annotation.label === "cr") {
    const level = annotation.level === "other" ? "Other" : annotation.level
    return {
      label: `CR · ${level} · src (${annotation.source})`,
      kind: "cr",
      source: annotation.source,
      level: annotation.level,
    }
  }
  if (annotation.label === "evidence") {
    return {
      label: `evidence · ${annotation.level} · src (${annotation.source})`,
      kind: "evidence",
      source: annotation.source,
      level: annotation.level,
    }
  }
  return { label: "proposal", kind: "proposal" }
}

export interface LevelBadge {
  level: string
  satisfied: boolean
}

export function levelBadges(satisfied: string[]): LevelBadge[] {
  return LEVEL_BADGES.map((level) => ({
    level,
    satisfied: satisfied.includes(level),
  }))
}
