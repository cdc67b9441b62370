#pragma once

// Hand-transcribed program/target pairs with known outputs.

#include <array>
#include <string_view>

namespace l2e::testing {

struct Listing {
  std::string_view task;
  int length;
  int nesting;
  std::string_view code;
  std::string_view target;  // without the end marker
};

inline constexpr std::array kListings = {
    Listing{"program", 4, 2, "j=8584\nfor x in range(8):\n  j+=920\nb=(1500+j)\nprint((b+7567)).", "25011"},
    Listing{"program", 4, 2, "i=8827\nc=(i-5347)\nprint((c+8704) if 2641<8500 else 5308).", "12184"},
    Listing{"addition", 6, 1, "print(398345+425098).", "823443"},
    Listing{"program", 4, 1, "print(6652).", "6652"},
    Listing{"program", 4, 1, "print((5997-738)).", "5259"},
    Listing{"program", 4, 1, "print((16*3071)).", "49136"},
    Listing{"program", 4, 1, "c=2060;\nprint((c-4387)).", "-2327"},
    Listing{"program", 4, 1, "print((2*5172)).", "10344"},
    Listing{"program", 4, 1, "print((9891-4715)).", "5176"},
    Listing{"program", 4, 1, "print(4849).", "4849"},
    Listing{"program", 4, 1, "print((4*7054)).", "28216"},
    Listing{"program", 4, 1, "print((4635-5257)).", "-622"},
    Listing{"program", 4, 1, "e=1079\nfor x in range(10):e+=4729\nprint(e).", "48369"},
    Listing{"program", 4, 2, "e=6653\nfor x in range(14):e+=6311\nprint(e).", "95007"},
    Listing{"program", 4, 2, "i=6404;\nprint((i+8074)).", "14478"},
    Listing{"program", 4, 2, "print((8*(5051-648))).", "35224"},
    Listing{"program", 4, 2, "h=(3681 if 9279<3033 else 6191)\nfor x in range(7):h-=9910\nprint(h).", "-63179"},
    Listing{"program", 4, 2, "print(((3210+2472)+1477)).", "7159"},
    Listing{"program", 4, 2, "b=8494\nfor x in range(2):b+=7484\nprint((b*14)).", "328468"},
    Listing{"program", 4, 2, "j=6447;\nprint((12*(j-4689))).", "21096"},
    Listing{"program", 4, 2, "print((13*9201)).", "119613"},
    Listing{"program", 4, 2, "g=1054;\nprint((6028+(g-1953))).", "5129"},
    Listing{"program", 4, 2, "d=6817\nfor x in range(7):d-=(4581-2186)\nprint(d).", "-9948"},
    Listing{"program", 4, 3, "f=4692\nfor x in range(4):f-=1664\nj=1443\nfor x in range(8):j+=f\nd=j\nfor x in range(11):d-=4699\nprint(d).", "-65958"},
    Listing{"program", 4, 3, "b=9930\nfor x in range(11):b-=4369\ng=b;\nprint(((g-8043)+9955)).", "-36217"},
    Listing{"program", 4, 3, "d=5446\nfor x in range(8):d+=(2678 if 4803<2829 else 9848)\nprint((d if 5935<4845 else 3043)).", "3043"},
    Listing{"program", 4, 3, "print((((2578 if 7750<1768 else 8639)-2590)+342)).", "6391"},
    Listing{"program", 4, 3, "print((((841 if 2076<7326 else 1869)*10) if 7827<317 else 7192)).", "7192"},
    Listing{"program", 4, 3, "d=8640;\nprint((7135 if 6710>((d+7080)*14) else 7200)).", "7200"},
    Listing{"program", 4, 3, "b=6968\nfor x in range(10):b-=(299 if 3389<9977 else 203)\nprint((12*b)).", "47736"},
    Listing{"program", 4, 3, "j=(1*5057);\nprint(((j+1215)+6931)).", "13203"},
    Listing{"program", 4, 3, "print(((1090-3305)+9466)).", "7251"},
    Listing{"program", 4, 3, "a=8331;\nprint((a-(15*7082))).", "-97899"},
    Listing{"program", 6, 1, "print((71647-548966)).", "-477319"},
    Listing{"program", 6, 1, "print(1508).", "1508"},
    Listing{"program", 6, 1, "j=611989;\nprint((j+763864)).", "1375853"},
    Listing{"program", 6, 1, "print((151108 if 289653>33296 else 564130)).", "151108"},
    Listing{"program", 6, 1, "c=142012\nfor x in range(12):c-=166776\nprint(c).", "-1859300"},
    Listing{"program", 6, 1, "print((678740+203140)).", "881880"},
    Listing{"program", 6, 1, "print((929067-75246)).", "853821"},
    Listing{"program", 6, 1, "d=960350\nfor x in range(24):d-=187946\nprint(d).", "-3550354"},
    Listing{"program", 6, 1, "print((8*786463)).", "6291704"},
    Listing{"program", 6, 1, "print((498592-570324)).", "-71732"},
    Listing{"program", 6, 2, "print((39007+416968)).", "455975"},
    Listing{"program", 6, 2, "print((586051+664462)).", "1250513"},
    Listing{"program", 6, 2, "print(948950).", "948950"},
    Listing{"program", 6, 2, "i=849846\nfor x in range(15):i-=557574\nprint((362961 if 881013<597832 else i)).", "-7513764"},
    Listing{"program", 6, 2, "g=977055;\nprint((g-(592222+268807))).", "116026"},
    Listing{"program", 6, 2, "print(((17*711621) if 224989>711768 else 267900)).", "267900"},
    Listing{"program", 6, 2, "j=114940;\nprint((j+482118)).", "597058"},
    Listing{"program", 6, 2, "print((171932*19)).", "3266708"},
    Listing{"program", 6, 2, "h=411671;\nprint((242648 if (h+31605)>679390 else 449699)).", "449699"},
    Listing{"program", 6, 2, "print(11332).", "11332"},
    Listing{"program", 6, 3, "c=335973;\nb=(c+756088);\nprint((6*(b+66858))).", "6953514"},
    Listing{"program", 6, 3, "c=935280;\nprint((765618 if 409621<(c-(329375 if 806201<240281 else 81797)) else 805944)).", "765618"},
    Listing{"program", 6, 3, "print(((670421 if 144271>805597 else 364643)*20)).", "7292860"},
    Listing{"program", 6, 3, "print((108196 if 714126>847153 else (888873-(381812*13)))).", "-4074683"},
    Listing{"program", 6, 3, "j=(181489 if 467875>46774 else (127738 if 866523<633391 else 592486));\nprint((j-627483)).", "-445994"},
    Listing{"program", 6, 3, "f=483654\nfor x in range(9):f-=913681\na=f\nfor x in range(12):a-=926785\nprint((124798 if a>326533 else 576599)).", "576599"},
    Listing{"program", 6, 3, "f=136315;\nh=(f+37592);\ng=418652;\nprint((g-(h+234728))).", "10017"},
    Listing{"program", 6, 3, "a=768606\nfor x in range(11):a+=454841\nf=a\nfor x in range(3):f-=696226\nprint((340434 if f<287035 else 523084)).", "523084"},
    Listing{"program", 6, 3, "b=468503;\nprint((b-(326264+406077))).", "-263838"},
    Listing{"program", 6, 3, "g=801925;\nprint((58095+(g+(824920 if 842317>176260 else 570318)))).", "1684940"},
    Listing{"addition", 6, 1, "print(284993+281178).", "566171"},
    Listing{"addition", 6, 1, "print(616216+423489).", "1039705"},
    Listing{"addition", 6, 1, "print(559794+837898).", "1397692"},
    Listing{"addition", 6, 1, "print(830194+551314).", "1381508"},
    Listing{"addition", 6, 1, "print(252849+873177).", "1126026"},
    Listing{"addition", 6, 1, "print(17513+163744).", "181257"},
    Listing{"addition", 6, 1, "print(530590+569236).", "1099826"},
    Listing{"addition", 6, 1, "print(856484+436077).", "1292561"},
    Listing{"addition", 6, 1, "print(731632+833163).", "1564795"},
    Listing{"addition", 6, 1, "print(738532+444531).", "1183063"},
    Listing{"addition", 8, 1, "print(32847917+95908452).", "128756369"},
    Listing{"addition", 8, 1, "print(49173072+46963478).", "96136550"},
    Listing{"addition", 8, 1, "print(79385668+60159139).", "139544807"},
    Listing{"addition", 8, 1, "print(16183468+42542767).", "58726235"},
    Listing{"addition", 8, 1, "print(15982788+54043908).", "70026696"},
    Listing{"addition", 8, 1, "print(45356253+31242293).", "76598546"},
    Listing{"addition", 8, 1, "print(93230501+12607891).", "105838392"},
    Listing{"addition", 8, 1, "print(2487336+40625181).", "43112517"},
    Listing{"addition", 8, 1, "print(61854571+75028157).", "136882728"},
    Listing{"addition", 8, 1, "print(13828700+10188872).", "24017572"},
};

}  // namespace l2e::testing
