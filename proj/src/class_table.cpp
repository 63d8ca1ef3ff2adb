#include "alticon/dataset.hpp"

namespace alticon {
namespace {

// 99 common icon classes with resource-id keywords, matched in order.
// The CLI can load an edited copy from data/icon_classes.json instead.
ClassTable make_builtin() {
    ClassTable t;
    auto add = [&t](std::string name, std::vector<std::string> keywords) {
        t.classes.emplace_back(std::move(name), std::move(keywords));
    };
    add("add", {"add", "plus", "create_new"});
    add("arrow_backward", {"arrow_backward", "arrow_back", "back_arrow", "back_button", "btn_back"});
    add("arrow_downward", {"arrow_downward", "arrow_down", "down_arrow"});
    add("arrow_forward", {"arrow_forward", "forward_arrow", "next_arrow"});
    add("arrow_upward", {"arrow_upward", "arrow_up", "up_arrow"});
    add("attach_file", {"attach"});
    add("av_forward", {"fast_forward", "ffwd", "seek_forward"});
    add("av_rewind", {"rewind", "seek_back"});
    add("avatar", {"avatar", "profile", "user_image"});
    add("bluetooth", {"bluetooth"});
    add("book", {"book"});
    add("bookmark", {"bookmark"});
    add("build", {"build", "tools"});
    add("call", {"call", "phone", "dial"});
    add("cart", {"cart", "basket"});
    add("chat", {"chat", "message", "comment"});
    add("check", {"check", "done", "confirm", "tick", "ok_button"});
    add("close", {"close", "cancel", "dismiss"});
    add("compare", {"compare"});
    add("copy", {"copy"});
    add("dashboard", {"dashboard"});
    add("date_range", {"date", "calendar"});
    add("delete", {"delete", "trash", "remove", "bin"});
    add("description", {"description", "document", "doc_"});
    add("dialpad", {"dialpad", "keypad"});
    add("edit", {"edit", "pencil", "compose"});
    add("email", {"email", "mail"});
    add("emoji", {"emoji", "smiley"});
    add("expand_less", {"expand_less", "collapse"});
    add("expand_more", {"expand_more", "expand", "dropdown", "drop_down"});
    add("explore", {"explore", "discover"});
    add("facebook", {"facebook", "fb_"});
    add("favorite", {"favorite", "favourite", "heart", "like"});
    add("file_download", {"download"});
    add("filter", {"filter"});
    add("filter_list", {"filter_list", "sort"});
    add("flash", {"flash"});
    add("flight", {"flight", "plane"});
    add("folder", {"folder"});
    add("follow", {"follow"});
    add("font", {"font", "typeface"});
    add("fullscreen", {"fullscreen", "full_screen"});
    add("gift", {"gift", "reward"});
    add("globe", {"globe", "world", "language"});
    add("group", {"group", "people", "friends"});
    add("help", {"help", "faq"});
    add("history", {"history", "recent"});
    add("home", {"home"});
    add("info", {"info", "about"});
    add("label", {"label", "tag_"});
    add("launch", {"launch", "open_in", "external"});
    add("layers", {"layers", "layer"});
    add("list", {"list"});
    add("location", {"location", "map", "place"});
    add("location_crosshair", {"crosshair", "my_location", "gps"});
    add("lock", {"lock", "secure", "password"});
    add("menu", {"menu", "hamburger", "drawer"});
    add("microphone", {"microphone", "mic_", "mic", "voice", "record_audio"});
    add("minus", {"minus", "decrease", "subtract"});
    add("more", {"more", "overflow", "options"});
    add("music", {"music", "song", "audio"});
    add("national_flag", {"flag", "country"});
    add("navigation", {"navigation", "navigate", "directions"});
    add("notifications", {"notification", "alert", "bell"});
    add("pause", {"pause"});
    add("photo", {"photo", "image", "picture", "gallery", "camera"});
    add("play", {"play"});
    add("playlist", {"playlist", "queue"});
    add("power", {"power", "shutdown"});
    add("redo", {"redo"});
    add("refresh", {"refresh", "reload", "sync", "update_button"});
    add("repeat", {"repeat", "loop"});
    add("reply", {"reply"});
    add("save", {"save"});
    add("search", {"search", "magnify", "find"});
    add("send", {"send", "submit"});
    add("settings", {"settings", "setting", "preference", "gear"});
    add("share", {"share"});
    add("shop", {"shop", "store", "buy"});
    add("skip_next", {"skip_next", "next_track", "btn_next", "next_button"});
    add("skip_previous", {"skip_previous", "previous", "prev_"});
    add("sliders", {"slider", "equalizer", "tune"});
    add("star", {"star", "rating", "rate"});
    add("stop", {"stop"});
    add("swap", {"swap", "switch_", "exchange"});
    add("switcher", {"switcher", "toggle"});
    add("thumbs_down", {"thumbs_down", "thumb_down", "dislike"});
    add("thumbs_up", {"thumbs_up", "thumb_up", "upvote"});
    add("time", {"time", "clock", "timer", "alarm"});
    add("undo", {"undo"});
    add("videocam", {"video", "videocam", "film", "movie"});
    add("visibility", {"visibility", "show_", "eye", "preview", "hide"});
    add("volume", {"volume", "mute", "sound", "speaker"});
    add("wallpaper", {"wallpaper", "background_image"});
    add("warning", {"warning", "error", "caution"});
    add("weather", {"weather"});
    add("wifi", {"wifi"});
    add("zoom_in", {"zoom_in", "zoomin"});
    add("zoom_out", {"zoom_out", "zoomout"});
    return t;
}

}  // namespace

const ClassTable& ClassTable::builtin() {
    static const ClassTable table = make_builtin();
    return table;
}

}  // namespace alticon
