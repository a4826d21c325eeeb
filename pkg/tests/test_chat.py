import pytest

from mazekit import parse_maze, print_program, serialize_maze, solve_high
from mazekit.chat import (
    ChatResponse,
    ChatUnavailable,
    ScriptedChatClient,
    ToolCall,
    WITHHELD_NOTICE,
    chat,
    run_tool,
    truncate_sentences,
)
from helpers import grid


def test_truncate_sentences():
    text = " ".join(f"Sentence {i}." for i in range(15))
    out = truncate_sentences(text)
    assert out.count(".") == 10


def test_truncate_short_text_untouched():
    assert truncate_sentences("Hello there.") == "Hello there."


def test_get_maze_state_is_canonical():
    m = grid("S b . G")
    assert run_tool("get_maze_state", m, 0) == serialize_maze(m)


def test_solve_low_tool():
    m = grid("S b . G")
    assert run_tool("solve_low", m, 0) == {
        "actions": ["attack", "move", "move", "move"]
    }


def test_solve_high_withheld_below_stage_two():
    m = grid("S . . . . G")
    result = run_tool("solve_high", m, 0)
    assert result == {"withheld": WITHHELD_NOTICE}
    result = run_tool("solve_high", m, 1)
    assert "program" not in result


def test_solve_high_released_at_stage_two():
    m = grid("S . . . . G")
    result = run_tool("solve_high", m, 2)
    assert result["program"] == print_program(solve_high(m).program)


def test_design_check_tool():
    m = grid("S . G")
    result = run_tool("design_check", m, 0)
    assert result["passed"] is False
    assert any(c["name"] == "size" for c in result["checks"])


def test_chat_requires_client():
    with pytest.raises(ChatUnavailable):
        chat(None, grid("S . G"), 0, [], "help")


def test_chat_executes_tools_locally():
    m = grid("S b . G")
    client = ScriptedChatClient([
        ChatResponse(tool_calls=(ToolCall("solve_low"),)),
        ChatResponse(text="Start by attacking the bat. What comes next?"),
    ])
    turn, tool_turns = chat(client, m, 0, [], "how do I start?")
    assert turn.role == "assistant"
    assert "attacking" in turn.text
    assert tool_turns[0].tool_call.name == "solve_low"
    assert tool_turns[0].tool_call.result == {
        "actions": ["attack", "move", "move", "move"]
    }


def test_chat_gates_solve_high_at_stage_zero():
    m = grid("S . . . . G")
    client = ScriptedChatClient([
        ChatResponse(tool_calls=(ToolCall("solve_high"),)),
        ChatResponse(text="I cannot reveal the program yet."),
    ])
    turn, tool_turns = chat(client, m, 0, [], "give me the final program")
    assert tool_turns[0].tool_call.result == {"withheld": WITHHELD_NOTICE}
    program_text = print_program(solve_high(m).program)
    assert program_text not in turn.text
    for t in tool_turns:
        assert program_text not in t.text


def test_chat_reply_truncated_to_ten_sentences():
    m = grid("S . G")
    long_text = " ".join(f"Sentence {i}." for i in range(20))
    client = ScriptedChatClient([ChatResponse(text=long_text)])
    turn, _ = chat(client, m, 0, [], "hi")
    assert turn.text.count(".") <= 10


def test_chat_context_includes_maze_and_history():
    m = grid("S . G")
    client = ScriptedChatClient([ChatResponse(text="Ok.")])
    history = [{"role": "student", "text": "earlier question"},
               {"role": "assistant", "text": "earlier answer"}]
    chat(client, m, 1, history, "next question")
    messages = client.requests[0]
    assert serialize_maze(m) in messages[0]["content"]
    assert "stage: 1" in messages[0]["content"]
    assert messages[1]["content"] == "earlier question"
    assert messages[-1]["content"] == "next question"
