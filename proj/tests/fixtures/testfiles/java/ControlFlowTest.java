import org.junit.Test;
import static org.junit.Assert.assertEquals;

public class ControlFlowTest {
    @Test
    public void testLoopSum() {
        int sum = 0;
        for (int i = 1; i <= 3; i++) {
            sum += i;
        }
        assertEquals(6, sum);
    }

    @Test
    public void testBranch() {
        int x = 7;
        if (x > 5) {
            x = 5;
        } else {
            x = 0;
        }
        assertEquals(5, x);
    }
}
