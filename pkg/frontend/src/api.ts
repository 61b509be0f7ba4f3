// Typed client for the annotation session API. The UI computes nothing
// itself: every label, stack entry, and prompt shown on screen comes out
// of these responses.

export interface TurnView {
  index: number
  speaker: string
  kind: string
  text: string
  action_note?: string
}

export interface ProposalView {
  source: number
  proposer: string
  satisfied: string[]
  close_cause?: string | null
  closed_by?: number | null
}

export interface AnnotationView {
  turn: number
  label: string
  source?: number
  level?: string
  gp_tag?: string
}

export interface SessionView {
  session_id: string
  version: number
  corpus: string
  dialogue: string
  annotator: string
  cursor: number
  finished: boolean
  turns: TurnView[]
  stack: { entries: ProposalView[]; closed: ProposalView[] }
  annotations: AnnotationView[]
}

export interface PromptView {
  finished: boolean
  version: number
  point?: string
  turn?: number
  candidate_source?: number | null
  question?: string
  answers?: string[]
}

export interface DialogueEntry {
  corpus: string
  dialogue: string
  turns: number
}

export interface LogEntryView {
  turn: number
  point: string
  answer: string
  gp_tag?: string
}

export class VersionConflictError extends Error {
  constructor(public serverVersion: number) {
    super(`session advanced elsewhere (server version ${serverVersion})`)
  }
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message)
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let message = `request failed with status ${response.status}`
  try {
    const payload = await response.json()
    if (payload && typeof payload.error === "string") {
      message = payload.error
    }
  } catch {
    // keep the generic message
  }
  return new ApiError(response.status, message)
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`
  }

  async createSession(
    corpus: string,
    dialogue: string,
    annotator: string,
    entries?: LogEntryView[],
  ): Promise<{ session_id: string; version: number }> {
    const body: Record<string, unknown> = { corpus, dialogue, annotator }
    if (entries && entries.length > 0) {
      body.entries = entries
    }
    const response = await fetch(this.url("/sessions"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    })
    if (response.status !== 201) {
      throw await parseError(response)
    }
    return response.json()
  }

  async getSession(sessionId: string): Promise<SessionView> {
    const response = await fetch(this.url(`/sessions/${sessionId}`))
    if (!response.ok) {
      throw await parseError(response)
    }
    return response.json()
  }

  async getPrompt(sessionId: string): Promise<PromptView> {
    const response = await fetch(this.url(`/sessions/${sessionId}/prompt`))
    if (!response.ok) {
      throw await parseError(response)
    }
    return response.json()
  }

  async postAnswer(
    sessionId: string,
    version: number,
    answer: string,
    gpTag?: string,
  ): Promise<{ version: number; finished: boolean }> {
    const body: Record<string, unknown> = { version, answer }
    if (gpTag) {
      body.gp_tag = gpTag
    }
    const response = await fetch(this.url(`/sessions/${sessionId}/answer`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    })
    if (response.status === 409) {
      const payload = await response.json()
      throw new VersionConflictError(payload.version)
    }
    if (!response.ok) {
      throw await parseError(response)
    }
    return response.json()
  }

  async exportSession(sessionId: string): Promise<string> {
    const response = await fetch(this.url(`/sessions/${sessionId}/export`))
    if (!response.ok) {
      throw await parseError(response)
    }
    return response.text()
  }

  async listDialogues(): Promise<DialogueEntry[]> {
    const response = await fetch(this.url("/dialogues"))
    if (!response.ok) {
      throw await parseError(response)
    }
    const text = await response.text()
    return text
      .split("\n")
      .filter((line) => line.trim().length > 0)
      .map((line) => JSON.parse(line))
  }
}

export function parseSessionFile(text: string): LogEntryView[] {
  const lines = text.split("\n").filter((line) => line.trim().length > 0)
  return lines.slice(1).map((line) => JSON.parse(line))
}
